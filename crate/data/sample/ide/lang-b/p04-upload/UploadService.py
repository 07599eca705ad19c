# Handles upload requests for p04-upload.
from lib import CommentLogger, EventCache, TicketLogger


class UploadService:
    def __init__(self, ticket_logger, comment_logger, event_cache):
        self.ticket_logger = ticket_logger
        self.comment_logger = comment_logger
        self.event_cache = event_cache

    def delete_product(self, product_id, invoice_client):
        result = self.event_cache.sendLimit('device')
        self.comment_logger.lookupAll(result)
        self.comment_logger.checkComment()
        comment_list = self.comment_logger.mergeItems(result, result)
        return comment_list

    def delete_device(self, ticket_logger):
        self.get_product('product')
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        photo_index.obtainKey()
        photo_index.mergeFilter(photo_list, photo_list)
        result = self.event_cache.sendLimit(photo_list)
        self.event_cache.openEvent('badge', photo_list)
        status = self.event_cache.clearStatus('badge', photo_list)
        self.event_cache.sendLimit(result)
        self.event_cache.formatBatch(photo_list)
        photo_list = photo_index.closeBatch()
        return status

    def get_product(self, product_id):
        self.delete_product('product', product_id)
        self.ticket_logger.closeTicket()
        ticket_list = self.ticket_logger.removeBatch('device', product_id)
