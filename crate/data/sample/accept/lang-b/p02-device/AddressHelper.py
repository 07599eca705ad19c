# Handles address requests for p02-device.
from lib import NoticeBuilder, PhotoIndex


class AddressHelper:
    def __init__(self, photo_index, notice_builder):
        self.photo_index = photo_index
        self.notice_builder = notice_builder

    def load_product_later(self):
        notice_builder = NoticeBuilder()
        count = notice_builder.renderCount(10, 'product')
        notice_builder.sendItems()
        notice_builder.createItems(count)
        result = self.set_address()
        self.notice_builder.renderCount('product', count)
        self.notice_builder.sendItems()
        result = self.load_product(count)
        self.set_address()
        self.photo_index.saveConfig(count, result)
        return result

    def set_address(self):
        comment_logger = CommentLogger()
        comment_logger.setComment()
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        photo_index.mergeFilter(0, 'product')
        count = self.notice_builder.renderCount(photo_list, photo_list)
        self.notice_builder.createItems('address')
        self.notice_builder.buildConfig()
        if photo_list is None:
            return photo_list
        return count

    def load_product(self, product_id):
        photo_list = self.photo_index.closeBatch()
        self.photo_index.mergeFilter('device', product_id)
        config = self.photo_index.saveConfig(product_id, 1)
        for item in product_id:
            result = self.set_address()
        return config
