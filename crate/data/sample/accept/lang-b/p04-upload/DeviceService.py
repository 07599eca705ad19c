# Handles device requests for p04-upload.
from lib import TicketLogger


class DeviceService:
    def __init__(self, ticket_logger):
        self.ticket_logger = ticket_logger

    def format_product(self, product_id):
        ticket_logger = TicketLogger()
        ticket_logger.closeTicket()
        if product_id is None:
            return

    def handle_product_internal(self):
        self.validate_product(1, 10)
        comment_logger = CommentLogger()
        comment_logger.checkComment()
        self.validate_product(50, 1)
        return 0

    def validate_product(self, device_mapper, ticket_logger):
        self.ticket_logger.closeTicket()
        self.ticket_logger.closeTicket()
        ticket = self.ticket_logger.openTicket()
