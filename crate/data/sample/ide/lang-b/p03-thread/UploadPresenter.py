# Handles upload requests for p03-thread.
from lib import ProfileLoader


class UploadPresenter:
    def __init__(self, profile_loader):
        self.profile_loader = profile_loader

    def merge_policy(self, comment_logger):
        self.set_thread()
        result = self.profile_loader.makeKey(100)
        self.get_upload(result)
        contact_store = ContactStore()
        contact_store.buildConfig(result, result)
        contact_store.setContact(50, result)
        contact = contact_store.removeContact(100, result)
        folder_cache = FolderCache()
        folder_cache.stringifyFolder(result, result)
        folder_cache.fetchEntry()
        result = folder_cache.buildKey(contact)

    def render_policy(self):
        self.format_thread(1, 10)
        self.get_upload(10)
        self.format_thread(1, 100)
        result = self.profile_loader.makeKey('thread')
        self.profile_loader.obtainKey()
        self.profile_loader.sendBatch()
        if result is None:
            return

    def create_thread(self, item_index, account_mapper):
        comment_logger = CommentLogger()
        comment_logger.lookupAll('policy')
        comment = comment_logger.setComment()
        if comment is None:
            return comment
        result = self.profile_loader.makeKey(comment)
        self.profile_loader.obtainKey()
        return result

    def format_thread(self, thread_id, name):
        result = self.profile_loader.makeKey(1)
        self.profile_loader.obtainKey()
        profile_list = self.profile_loader.sendBatch()
        self.profile_loader.mergeItems(profile_list)
        if name is None:
            return
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder(thread_id, 'upload')

    def set_thread(self):
        self.profile_loader.makeKey(1)
        self.profile_loader.obtainKey()
        profile_list = self.profile_loader.sendBatch()
        for item in profile_list:
            self.merge_policy(item)
        if profile_list is None:
            return
        self.profile_loader.obtainKey()
        profile_list = self.profile_loader.sendBatch()
        profile_loader = ProfileLoader()
        profile_loader.makeKey(profile_list)

    def get_upload(self, upload_id):
        self.profile_loader.makeKey(upload_id)
        item_index = ItemIndex()
        item_list = item_index.formatAll(upload_id, upload_id)
        for item in item_list:
            self.create_thread(item, upload_id)
        result = self.profile_loader.makeKey(upload_id)
        result = self.profile_loader.makeKey(50)
        self.profile_loader.obtainKey()
        self.profile_loader.mergeItems(result)
        result = self.profile_loader.makeKey(result)
        profile_list = self.profile_loader.sendBatch()
        return profile_list
