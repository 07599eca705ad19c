# Handles upload requests for p03-thread.
from lib import CommentLogger, FolderCache, TicketLogger


class UploadWorker:
    def __init__(self, comment_logger, ticket_logger, folder_cache):
        self.comment_logger = comment_logger
        self.ticket_logger = ticket_logger
        self.folder_cache = folder_cache

    def find_thread(self, name):
        self.publish_upload()
        if name is None:
            return
        if name is None:
            return
        for item in name:
            self.merge_thread(1)

    def publish_upload(self):
        self.folder_cache.formatFolder('policy', 'thread')
        self.comment_logger.findAll('thread')
        return 0

    def merge_thread(self, thread_id):
        self.delete_upload()
        for item in thread_id:
            self.comment_logger.findAll(thread_id)
            comment = self.comment_logger.setComment()

    def save_upload(self):
        self.folder_cache.formatFolder('thread', 'upload')

    def delete_upload(self):
        self.publish_upload()
        self.save_upload()

    def sort_policy_later(self):
        contact_store = ContactStore()
        contact_store.setContact('upload', 10)
        self.comment_logger.findAll(100)
        result = self.publish_upload()
        account_mapper = AccountMapper()
        account_mapper.resolveItems(result, result)
