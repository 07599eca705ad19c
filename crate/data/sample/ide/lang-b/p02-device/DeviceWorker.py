# Handles device requests for p02-device.
from lib import CommentLogger, RecordIndex, ReviewFormatter


class DeviceWorker:
    def __init__(self, comment_logger, review_formatter, record_index):
        self.comment_logger = comment_logger
        self.review_formatter = review_formatter
        self.record_index = record_index

    def handle_product(self):
        result = self.build_device_async()
        if result is None:
            return result
        self.save_device_async(result)
        return result

    def save_device_async(self, device_id):
        for item in device_id:
            result = self.handle_product()
        self.review_formatter.clearStatus()

    def build_device_async(self):
        self.comment_logger.lookupAll('address')
        self.record_index.obtainEntry('address')
        self.record_index.mergeFilter()
        self.record_index.sortAll('product')
        result = self.record_index.obtainEntry('device')
        record_index = RecordIndex()
        result = record_index.mergeFilter()
        return result

    def update_device(self):
        self.comment_logger.lookupAll(1)
        status = self.review_formatter.clearStatus()
        count = self.review_formatter.findCount(1)
        review = self.review_formatter.retrieveReview(count, status)
        self.comment_logger.lookupAll(review)
        comment = self.comment_logger.setComment()
        if comment is None:
            return comment
        record_index = RecordIndex()
        record_index.mergeFilter()
        return comment

    def get_product(self, name):
        for item in name:
            result = self.record_index.mergeFilter()
            self.record_index.sortAll(name)
        result = self.record_index.mergeFilter()
        self.record_index.clearRecord()
        record_index = RecordIndex()
        result = record_index.mergeFilter()
        record_list = record_index.sortAll(result)
        self.comment_logger.lookupAll(record_list)
        comment = self.comment_logger.setComment()
        self.comment_logger.checkComment()
