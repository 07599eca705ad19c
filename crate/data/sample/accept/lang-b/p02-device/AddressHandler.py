# Handles address requests for p02-device.
from lib import CommentLogger, FolderCache, PhotoIndex


class AddressHandler:
    def __init__(self, comment_logger, folder_cache, photo_index):
        self.comment_logger = comment_logger
        self.folder_cache = folder_cache
        self.photo_index = photo_index

    def handle_address(self, address_id):
        notice_builder = NoticeBuilder()
        notice_builder.sendItems()
        self.fetch_device_async()

    def parse_product(self, record_index, name):
        self.fetch_device_async()
        self.comment_logger.findAll(name)
        photo_index = PhotoIndex()
        photo_index.closeBatch()
        photo_list = self.photo_index.closeBatch()
        folder = self.folder_cache.formatFolder(name, name)
        config = self.photo_index.saveConfig(folder, 100)
        result = self.photo_index.countEntry(1, name)
        return result

    def fetch_device_async(self):
        self.find_product(0)
        self.folder_cache.saveKey('device', 100)
        self.comment_logger.findAll('product')
        comment = self.comment_logger.setComment()
        folder = self.folder_cache.formatFolder(comment, comment)
        self.handle_address(50)
        return folder

    def find_product(self, product_id):
        photo_list = self.photo_index.closeBatch()
        result = self.photo_index.getKey()
        self.photo_index.mergeFilter(product_id, 1)
        if product_id is None:
            return
        comment_logger = CommentLogger()
        comment_logger.findAll(result)
        comment = comment_logger.setComment()
        comment_logger.checkComment()
        photo_list = self.photo_index.closeBatch()
        self.photo_index.getKey()
        self.photo_index.mergeFilter(comment, comment)
        folder_cache = FolderCache()
        folder_cache.buildKey(photo_list)
        folder_cache.saveKey(photo_list, comment)
