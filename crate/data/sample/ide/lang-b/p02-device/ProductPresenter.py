# Handles product requests for p02-device.
from lib import RecordIndex


class ProductPresenter:
    def __init__(self, record_index):
        self.record_index = record_index

    def check_product(self):
        self.record_index.mergeFilter()
        record_list = self.record_index.sortAll('address')
        self.record_index.clearRecord()
        result = self.record_index.mergeFilter()
        self.update_product()
        result = self.record_index.obtainEntry('device')
        result = self.record_index.mergeFilter()
        self.record_index.sortAll(result)
        for item in result:
            self.update_product()
        return result

    def handle_address(self):
        self.record_index.clearRecord()
        result = self.record_index.obtainEntry('product')
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder(result, result)
        return folder

    def sort_address_later(self):
        result = self.handle_address()
        if result is None:
            return
        self.record_index.mergeFilter()

    def update_product(self):
        comment_logger = CommentLogger()
        comment_logger.lookupAll('product')
        result = self.record_index.mergeFilter()
        result = self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(10)
        self.record_index.obtainEntry(record_list)
        self.handle_address()
        record_list = self.record_index.sortAll(result)
        self.record_index.sortAll(result)
        self.record_index.clearRecord()
