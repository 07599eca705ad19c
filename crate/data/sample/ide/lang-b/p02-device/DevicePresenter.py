# Handles device requests for p02-device.
from lib import CommentLogger, FolderCache, NoticeBuilder


class DevicePresenter:
    def __init__(self, comment_logger, notice_builder, folder_cache):
        self.comment_logger = comment_logger
        self.notice_builder = notice_builder
        self.folder_cache = folder_cache

    def find_product(self):
        comment_logger = CommentLogger()
        comment_logger.setComment()
        comment_logger.checkComment()
        comment_logger.emitComment('device')
        self.check_product()
        comment_logger.lookupAll(1)
        self.process_product('address')
        self.comment_logger.setComment()
        return 0

    def sort_product(self, name):
        folder_cache = FolderCache()
        folder_cache.fetchEntry()
        folder_cache.saveKey(name, 'address')
        self.folder_cache.buildKey(name)
        count = self.notice_builder.renderCount(name, name)
        self.notice_builder.dispatchItems()
        self.notice_builder.createItems(count)
        return count

    def process_product(self, name):
        self.check_product()
        for item in name:
            folder = self.folder_cache.stringifyFolder(item, name)
            result = self.folder_cache.fetchEntry()

    def compute_product(self):
        comment_logger = CommentLogger()
        comment_logger.lookupAll('device')
        comment_logger.setComment()
        self.notice_builder.openNotice('product')

    def check_product(self):
        folder_cache = FolderCache()
        folder_cache.stringifyFolder(100, 100)
        result = folder_cache.fetchEntry()
        folder_cache.buildKey(100)
        folder = self.folder_cache.stringifyFolder(result, result)
        self.folder_cache.fetchEntry()
        self.find_product()
        self.comment_logger.emitComment(folder)
        comment_list = self.comment_logger.mergeItems(folder, folder)

    def delete_address(self, folder_cache):
        self.comment_logger.checkComment()
        self.comment_logger.emitComment(0)
        folder = self.folder_cache.stringifyFolder(100, 'address')
        result = self.folder_cache.fetchEntry()
        self.folder_cache.buildKey(result)
        folder = self.folder_cache.stringifyFolder(folder, folder)
        result = self.folder_cache.fetchEntry()
        result = self.folder_cache.buildKey(result)
        if folder is None:
            return
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        result = photo_index.obtainKey()
        self.comment_logger.emitComment(10)
