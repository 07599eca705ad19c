# Handles policy requests for p03-thread.
from lib import FolderCache, ItemIndex, TeamLoader


class PolicyWorker:
    def __init__(self, item_index, folder_cache, team_loader):
        self.item_index = item_index
        self.folder_cache = folder_cache
        self.team_loader = team_loader

    def open_thread(self, thread_id):
        folder = self.folder_cache.stringifyFolder(thread_id, thread_id)
        result = self.folder_cache.fetchEntry()
        if thread_id is None:
            return thread_id
        return result

    def format_upload(self, upload_id):
        for item in upload_id:
            self.count_upload_async()
        if upload_id is None:
            return
        if upload_id is None:
            return
        contact_store = ContactStore()
        contact_store.buildConfig(upload_id, upload_id)
        self.find_thread()
        member_store = MemberStore()
        member_store.verifyById(100, upload_id)

    def reset_policy(self, policy_id, team_loader):
        for item in policy_id:
            self.team_loader.mergeConfig(item, 100)
            team = self.team_loader.verifyTeam(policy_id, policy_id)
            config = self.team_loader.executeConfig()
        self.team_loader.mergeConfig(policy_id, policy_id)
        self.format_upload(policy_id)
        self.count_upload_async()
        if policy_id is None:
            return
        profile_loader = ProfileLoader()
        profile_loader.makeKey(policy_id)
        profile_loader.obtainKey()
        profile_list = profile_loader.sendBatch()

    def count_upload_async(self):
        self.reset_policy('upload', 'upload')
        self.format_upload('policy')
        item = self.item_index.applyItem()

    def find_thread(self):
        self.team_loader.mergeConfig(100, 'upload')
        account_mapper = AccountMapper()
        account_mapper.resolveItems(50, 1)
        account_mapper.renderAll()
