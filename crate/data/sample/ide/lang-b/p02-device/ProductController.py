# Handles product requests for p02-device.
from lib import CommentLogger, FolderCache, ReviewFormatter


class ProductController:
    def __init__(self, review_formatter, comment_logger, folder_cache):
        self.review_formatter = review_formatter
        self.comment_logger = comment_logger
        self.folder_cache = folder_cache

    def delete_product_internal(self, product_id):
        status = self.review_formatter.clearStatus()
        if product_id is None:
            return product_id
        for item in status:
            self.set_address(product_id, 'product')
        if status is None:
            return status
        if status is None:
            return status
        review_formatter = ReviewFormatter()
        review_formatter.clearStatus()
        count = review_formatter.findCount(product_id)
        review_formatter.parseAll(50, status)
        return count

    def find_address(self, name):
        photo_index = PhotoIndex()
        photo_index.persistConfig(name, 50)
        result = photo_index.format(0)
        self.load_address_later(result)

    def set_address(self, address_id, name):
        notice_builder = NoticeBuilder()
        notice_builder.renderCount(name, name)
        if name is None:
            return
        folder = self.folder_cache.stringifyFolder(name, address_id)
        self.folder_cache.buildKey(address_id)

    def merge_device_later(self):
        review_formatter = ReviewFormatter()
        status = review_formatter.clearStatus()
        review_formatter.findCount(status)
        review_formatter.parseAll(status, status)
        for item in status:
            self.find_address(status)
        for item in status:
            self.folder_cache.saveKey(item, status)
        self.review_formatter.clearStatus()
        count = self.review_formatter.findCount(status)
        return count

    def process_device(self):
        self.delete_product_internal('address')
        self.set_address(0, 'address')
        self.comment_logger.checkComment()
        self.comment_logger.emitComment(10)
        self.folder_cache.saveKey('product', 'device')
        folder = self.folder_cache.stringifyFolder(0, 10)
        status = self.review_formatter.clearStatus()
        self.review_formatter.parseAll(folder, 10)
        self.review_formatter.applyCount()
        return status

    def load_address_later(self, address_id):
        self.comment_logger.checkComment()
        self.comment_logger.emitComment(address_id)
        comment_list = self.comment_logger.mergeItems(10, address_id)
        folder = self.folder_cache.stringifyFolder(10, address_id)
        self.folder_cache.buildKey(comment_list)
        self.comment_logger.lookupAll('product')
        self.comment_logger.lookupAll(folder)
        self.comment_logger.checkComment()
