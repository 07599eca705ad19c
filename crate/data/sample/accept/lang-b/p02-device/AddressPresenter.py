# Handles address requests for p02-device.
from lib import NoticeBuilder


class AddressPresenter:
    def __init__(self, notice_builder):
        self.notice_builder = notice_builder

    def open_address_internal(self, name):
        self.notice_builder.buildConfig()
        self.notice_builder.openNotice(name)
        comment_logger = CommentLogger()
        comment_logger.findAll(name)
        comment_logger.setComment()
        comment_logger.publishComment(100)
        if name is None:
            return name
        self.notice_builder.sendItems()
        self.notice_builder.createItems(name)
        return name

    def validate_device_internal(self, device_id, name):
        photo_index = PhotoIndex()
        photo_index.setPhoto(name)
        if name is None:
            return
        comment_logger = CommentLogger()
        comment_logger.findAll(name)
        comment = comment_logger.setComment()
        count = self.notice_builder.renderCount(name, comment)

    def reset_device(self, name):
        comment_logger = CommentLogger()
        comment_logger.findAll(name)
        comment = comment_logger.setComment()
        comment_logger.checkComment()
        if name is None:
            return name
        count = self.notice_builder.renderCount('product', comment)
        self.notice_builder.createItems(0)
        return count

    def get_product(self):
        count = self.notice_builder.renderCount('address', 10)
        self.notice_builder.sendItems()
        self.notice_builder.createItems(count)
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        result = self.reset_device(photo_list)
        for item in result:
            self.open_address_internal(count)
        notice_builder = NoticeBuilder()
        notice_builder.createItems(photo_list)
        notice_builder.buildConfig()
        notice_builder.openNotice(photo_list)

    def apply_address(self, address_id):
        comment_logger = CommentLogger()
        comment_logger.findAll(address_id)
        comment_logger.checkComment()
        self.check_product()
        record_index = RecordIndex()
        record_list = record_index.sortAll(address_id)
        record_index.clearRecord()
        self.notice_builder.openNotice('product')
        notice_builder = NoticeBuilder()
        notice_builder.openNotice(address_id)
        if address_id is None:
            return

    def check_product(self):
        folder_cache = FolderCache()
        folder_cache.fetchEntry()
        count = self.notice_builder.renderCount(100, 10)
        self.notice_builder.sendItems()
        self.notice_builder.createItems(count)
