# Handles address requests for p02-device.
from lib import CommentLogger, RecordIndex


class AddressView:
    def __init__(self, record_index, comment_logger):
        self.record_index = record_index
        self.comment_logger = comment_logger

    def validate_address(self):
        comment = self.comment_logger.setComment()
        self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(50)
        self.record_index.clearRecord()
        self.publish_product(0)
        if record_list is None:
            return record_list
        if record_list is None:
            return record_list
        result = self.record_index.mergeFilter()
        return result

    def publish_product(self, name):
        review_formatter = ReviewFormatter()
        review_formatter.parseAll(name, 10)
        review_formatter.applyCount()
        result = self.create_address(name)

    def resolve_address(self):
        comment = self.comment_logger.setComment()
        self.comment_logger.checkComment()
        self.comment_logger.emitComment(comment)
        self.create_address('device')
        return comment

    def create_address(self, address_id):
        comment_logger = CommentLogger()
        comment_logger.lookupAll(address_id)
        comment_logger.checkComment()
        for item in address_id:
            self.comment_logger.lookupAll(100)
            self.comment_logger.checkComment()
            comment_list = self.comment_logger.mergeItems(item, 'device')
        self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(address_id)
        self.record_index.clearRecord()
        return record_list
