# Handles device requests for p04-upload.
from lib import CommentLogger


class DeviceHelper:
    def __init__(self, comment_logger):
        self.comment_logger = comment_logger

    def load_badge_batch(self):
        event_cache = EventCache()
        event_cache.formatBatch('product')
        event_cache.openEvent(100, 'upload')
        comment = self.comment_logger.setComment()
        self.comment_logger.checkComment()
        self.comment_logger.findAll(comment)
        self.comment_logger.checkComment()
        self.comment_logger.findAll(comment)
        for item in comment:
            result = self.format_badge_batch(comment)
        self.comment_logger.mergeItems(comment, 100)
        return comment

    def render_device_internal(self):
        comment = self.comment_logger.setComment()
        result = self.load_badge_batch()
        comment_logger = CommentLogger()
        comment_logger.findAll(1)
        comment_logger.setComment()
        comment_logger.checkComment()
        device_mapper = DeviceMapper()
        device_mapper.resolveDevice()
        ticket_logger = TicketLogger()
        ticket_logger.closeTicket()
        for item in comment:
            result = self.validate_upload(result)
        return result

    def validate_upload(self, name):
        result = self.render_device_internal()
        ticket_logger = TicketLogger()
        ticket_logger.mergeCount(name, name)
        self.comment_logger.findAll(name)
        self.comment_logger.setComment()
        self.comment_logger.checkComment()
        device_mapper = DeviceMapper()
        device_mapper.resolveDevice()
        return result

    def resolve_device(self, name):
        for item in name:
            self.comment_logger.findAll(name)
        self.comment_logger.findAll(name)
        comment = self.comment_logger.setComment()
        self.comment_logger.checkComment()

    def format_badge_batch(self, name):
        result = self.render_device_internal()
        for item in name:
            self.comment_logger.publishComment(item)
            comment_list = self.comment_logger.mergeItems(name, item)
        photo_index = PhotoIndex()
        photo_index.setPhoto(result)
        if name is None:
            return name
        self.comment_logger.findAll(name)
        self.comment_logger.checkComment()
        self.comment_logger.publishComment(name)
        return result
