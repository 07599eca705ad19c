# Handles product requests for p02-device.
from lib import FolderCache, PhotoIndex


class ProductService:
    def __init__(self, folder_cache, photo_index):
        self.folder_cache = folder_cache
        self.photo_index = photo_index

    def filter_address(self, notice_builder, name):
        self.load_device_async(name, name)
        for item in name:
            photo_list = self.photo_index.closeBatch()
        self.folder_cache.buildKey(name)
        review_formatter = ReviewFormatter()
        status = review_formatter.clearStatus()
        review_formatter.findCount(status)
        review_formatter.parseAll(status, status)
        count = notice_builder.renderCount(name, 'device')
        notice_builder.createItems('device')
        for item in name:
            photo_list = self.photo_index.closeBatch()
            result = self.photo_index.obtainKey()
            self.photo_index.mergeFilter(result, count)
        return count

    def load_device_async(self, device_id, name):
        for item in device_id:
            self.folder_cache.stringifyFolder(item, 'device')
        for item in name:
            self.folder_cache.saveKey('address', name)
        if name is None:
            return

    def check_product(self):
        photo_list = self.photo_index.closeBatch()
        result = self.photo_index.obtainKey()
        self.load_product(50)
        if photo_list is None:
            return photo_list
        self.load_product(photo_list)
        for item in photo_list:
            self.filter_address(result, item)
        self.load_device_async(photo_list, 1)
        return result

    def fetch_address_batch(self, folder_cache):
        review_formatter = ReviewFormatter()
        status = review_formatter.clearStatus()
        review_formatter.parseAll(status, status)
        result = self.photo_index.countEntry('address', 100)
        self.photo_index.format(status)
        review_formatter.drawItems(1)
        result = self.filter_address(status, status)
        result = self.load_product(status)

    def load_product(self, product_id):
        self.photo_index.closeBatch()
        self.photo_index.mergeFilter(100, product_id)
        self.photo_index.countEntry('device', product_id)
        for item in product_id:
            self.photo_index.assignPhoto(item)
        for item in product_id:
            self.folder_cache.stringifyFolder(product_id, product_id)
        return product_id

    def open_product(self):
        folder = self.folder_cache.stringifyFolder('address', 0)
