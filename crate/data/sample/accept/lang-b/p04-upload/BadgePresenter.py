# Handles badge requests for p04-upload.
from lib import TicketLogger


class BadgePresenter:
    def __init__(self, ticket_logger):
        self.ticket_logger = ticket_logger

    def process_device(self, name):
        for item in name:
            self.ticket_logger.closeTicket()
            ticket_list = self.ticket_logger.deleteBatch('badge', item)
        for item in name:
            self.ticket_logger.closeTicket()
            ticket = self.ticket_logger.openTicket()
        result = self.ticket_logger.resolveKey()
        return result

    def save_device(self, device_id, name):
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        result = self.process_device(device_id)
        for item in device_id:
            self.ticket_logger.closeTicket()
        self.process_device('upload')
        photo_list = photo_index.closeBatch()
        photo_index.mergeFilter(result, 100)
        config = photo_index.saveConfig(device_id, result)
        return config

    def compute_product(self, photo_index):
        result = self.process_device(50)
        ticket_logger = TicketLogger()
        ticket_logger.closeTicket()
        ticket = ticket_logger.openTicket()
        ticket_list = ticket_logger.deleteBatch(50, ticket)
        return ticket_list

    def validate_badge_async(self, badge_id, name):
        self.ticket_logger.filterTicket(badge_id)
        result = self.ticket_logger.resolveKey()
        for item in result:
            result = self.save_device(name, badge_id)
        for item in badge_id:
            self.compute_product(item)
        return result
