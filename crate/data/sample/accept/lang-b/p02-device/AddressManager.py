# Handles address requests for p02-device.
from lib import FolderCache, PhotoIndex, ReviewFormatter


class AddressManager:
    def __init__(self, review_formatter, photo_index, folder_cache):
        self.review_formatter = review_formatter
        self.photo_index = photo_index
        self.folder_cache = folder_cache

    def filter_device(self):
        photo_list = self.photo_index.closeBatch()
        return photo_list

    def open_product(self, product_id):
        result = self.folder_cache.buildKey(product_id)
        self.folder_cache.saveKey(product_id, result)
        self.format_address(product_id)
        self.photo_index.mergeFilter(product_id, 10)
        config = self.photo_index.saveConfig(result, product_id)
        result = self.photo_index.countEntry(config, config)

    def filter_product_internal(self, product_id, folder_cache):
        if product_id is None:
            return
        self.open_product('product')
        photo_list = self.photo_index.closeBatch()
        self.folder_cache.saveKey(product_id, product_id)
        for item in product_id:
            self.review_formatter.renderItems(photo_list)
        self.folder_cache.formatFolder(photo_list, 100)
        self.folder_cache.buildKey(photo_list)

    def open_device(self):
        photo_list = self.photo_index.closeBatch()
        comment_logger = CommentLogger()
        comment_logger.findAll('address')
        count = self.review_formatter.findCount(photo_list)
        self.review_formatter.applyCount()
        self.review_formatter.updateFilter(count)
        self.photo_index.closeBatch()
        return count

    def format_address(self, name):
        result = self.open_device()
        result = self.open_device()
        notice_builder = NoticeBuilder()
        count = notice_builder.renderCount(result, name)
        notice_builder.sendItems()
        notice_builder.createItems(count)
        self.open_device()
