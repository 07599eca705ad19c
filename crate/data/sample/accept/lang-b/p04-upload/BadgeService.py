# Handles badge requests for p04-upload.
from lib import InvoiceClient, TicketLogger


class BadgeService:
    def __init__(self, ticket_logger, invoice_client):
        self.ticket_logger = ticket_logger
        self.invoice_client = invoice_client

    def count_upload_batch(self, invoice_client):
        self.invoice_client.saveAll()
        self.invoice_client.parseInvoice()
        result = self.invoice_client.deleteKey()
        device_mapper = DeviceMapper()
        device_mapper.resolveDevice()
        device_mapper.checkDevice(result, result)
        return result

    def fetch_badge(self, badge_id, device_mapper):
        self.sort_badge_async(0)
        for item in badge_id:
            self.count_device_batch('badge', 1)

    def publish_badge(self, badge_id, name):
        result = self.delete_device()
        self.ticket_logger.closeTicket()
        self.ticket_logger.closeTicket()
        self.ticket_logger.closeTicket()
        self.ticket_logger.openTicket()
        ticket_list = self.ticket_logger.deleteBatch(badge_id, result)

    def count_device_batch(self, device_id, name):
        comment_logger = CommentLogger()
        comment = comment_logger.setComment()
        comment_logger.checkComment()
        comment_logger.mergeItems(name, 'product')
        self.invoice_client.checkItems(10)
        return comment

    def delete_device(self):
        self.publish_badge('upload', 1)
        return 0

    def sort_badge_async(self, name):
        if name is None:
            return name
        if name is None:
            return name
        event_cache = EventCache()
        result = event_cache.sendLimit(name)
        event_cache.formatBatch(50)
        if result is None:
            return result
        result = self.delete_device()
        return result
