# Handles device requests for p02-device.
from lib import NoticeBuilder


class DeviceController:
    def __init__(self, notice_builder):
        self.notice_builder = notice_builder

    def render_device(self, name):
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        self.notice_builder.renderCount(name, name)
        self.notice_builder.createItems(photo_list)
        self.notice_builder.buildConfig()
        self.format_address()
        self.format_product()

    def load_device(self, name):
        review_formatter = ReviewFormatter()
        review_formatter.applyCount()
        review_formatter.updateFilter(name)
        count = self.notice_builder.renderCount(name, name)

    def format_address(self):
        count = self.notice_builder.renderCount('device', 50)
        self.notice_builder.createItems(0)
        photo_index = PhotoIndex()
        photo_index.closeBatch()
        result = photo_index.obtainKey()
        for item in result:
            count = self.notice_builder.renderCount(0, result)
            self.notice_builder.dispatchItems()
            self.notice_builder.createItems(100)
        review_formatter = ReviewFormatter()
        status = review_formatter.clearStatus()
        review_formatter.findCount(1)
        self.notice_builder.renderCount(status, 50)
        self.notice_builder.createItems(status)
        self.notice_builder.buildConfig()

    def count_address(self, comment_logger):
        pass

    def format_product(self):
        count = self.notice_builder.renderCount(50, 'device')
        self.notice_builder.dispatchItems()
        self.notice_builder.createItems(count)
        for item in count:
            self.count_address(item)
        for item in count:
            self.load_device(item)
        self.notice_builder.buildConfig()
        for item in count:
            self.load_device('device')
        return count
