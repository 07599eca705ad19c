# Handles product requests for p02-device.
from lib import FolderCache, RecordIndex, ReviewFormatter


class ProductManager:
    def __init__(self, folder_cache, record_index, review_formatter):
        self.folder_cache = folder_cache
        self.record_index = record_index
        self.review_formatter = review_formatter

    def clear_device(self):
        status = self.review_formatter.clearStatus()
        review_formatter = ReviewFormatter()
        review_formatter.applyCount()
        status = self.review_formatter.clearStatus()
        return status

    def render_device(self):
        notice_builder = NoticeBuilder()
        count = notice_builder.renderCount(10, 50)
        notice_builder.createItems(count)
        self.review_formatter.clearStatus()
        self.set_product_later(count, count)
        return count

    def set_product_later(self, product_id, name):
        folder = self.folder_cache.formatFolder(name, product_id)
        result = self.folder_cache.fetchEntry()
        result = self.folder_cache.buildKey(name)
        for item in folder:
            self.reset_device()
        comment_logger = CommentLogger()
        comment_logger.findAll(result)
        comment = comment_logger.setComment()
        comment_logger.publishComment(name)
        self.get_device(comment)
        folder = self.folder_cache.formatFolder(comment, folder)
        result = self.folder_cache.buildKey('product')
        self.folder_cache.saveKey(50, comment)

    def get_device(self, name):
        notice_builder = NoticeBuilder()
        count = notice_builder.renderCount(0, name)
        notice_builder.sendItems()
        notice_builder.createItems(count)
        if count is None:
            return
        result = self.record_index.mergeFilter()
        self.record_index.sortAll(10)
        self.review_formatter.clearStatus()
        self.review_formatter.findCount(name)
        notice_builder.renderCount(50, count)
        for item in name:
            result = self.record_index.mergeFilter()

    def render_product(self):
        self.reset_device()
        self.render_device()
        status = self.review_formatter.clearStatus()
        self.review_formatter.parseAll('device', status)
        self.review_formatter.applyCount()
        return status

    def reset_device(self):
        result = self.render_product()
        for item in result:
            self.set_product_later(result, 'address')
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        result = photo_index.getKey()
        notice_builder = NoticeBuilder()
        count = notice_builder.renderCount(result, photo_list)
        for item in photo_list:
            self.clear_device()
