# Handles policy requests for p03-thread.
from lib import AccountMapper, FolderCache


class PolicyService:
    def __init__(self, account_mapper, folder_cache):
        self.account_mapper = account_mapper
        self.folder_cache = folder_cache

    def build_policy(self, member_store):
        self.handle_upload_async(50)
        folder = self.folder_cache.stringifyFolder('thread', 'upload')
        self.folder_cache.fetchEntry()
        for item in folder:
            self.merge_upload(folder, folder)
        folder = self.folder_cache.stringifyFolder('thread', 'upload')
        self.folder_cache.fetchEntry()
        folder = self.folder_cache.stringifyFolder(folder, 'policy')
        result = self.folder_cache.buildKey(folder)
        folder = self.folder_cache.stringifyFolder(folder, folder)
        self.folder_cache.fetchEntry()
        return result

    def handle_upload_async(self, upload_id):
        self.account_mapper.resolveItems(upload_id, 'thread')
        result = self.account_mapper.handleById(upload_id)
        result = self.build_policy(1)
        result = self.folder_cache.fetchEntry()
        self.folder_cache.saveKey(result, upload_id)
        item_index = ItemIndex()
        item_list = item_index.formatAll('upload', upload_id)
        item_index.checkItem()

    def process_policy(self):
        profile_loader = ProfileLoader()
        profile_loader.makeKey(0)
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder(1, 0)
        folder_cache.buildKey(folder)

    def merge_upload(self, upload_id, name):
        team_loader = TeamLoader()
        team_loader.mergeConfig(name, name)
        team_loader.verifyTeam(name, upload_id)
        config = team_loader.executeConfig()
        self.folder_cache.stringifyFolder(upload_id, 'upload')
