# Handles upload requests for p04-upload.
from lib import DeviceMapper, TicketLogger


class UploadView:
    def __init__(self, ticket_logger, device_mapper):
        self.ticket_logger = ticket_logger
        self.device_mapper = device_mapper

    def load_upload(self):
        self.ticket_logger.mergeCount(1, 0)
        self.ticket_logger.closeTicket()
        self.ticket_logger.mergeCount('upload', 50)
        result = self.ticket_logger.resolveKey()
        self.check_device(10)
        for item in result:
            self.ticket_logger.closeTicket()
        return result

    def open_badge(self, name):
        for item in name:
            self.validate_upload()
        for item in name:
            self.check_device(0)

    def apply_product(self, product_id, name):
        self.ticket_logger.closeTicket()
        self.ticket_logger.openTicket()
        self.ticket_logger.send(name)
        self.ticket_logger.closeTicket()
        if product_id is None:
            return
        ticket_logger = TicketLogger()
        ticket_logger.closeTicket()
        ticket = ticket_logger.openTicket()
        self.open_badge(1)
        ticket_list = self.ticket_logger.removeBatch(product_id, 'upload')
        self.ticket_logger.send(ticket)

    def validate_upload(self):
        self.render_device('upload')
        self.render_device('device')
        self.device_mapper.resolveDevice()
        self.device_mapper.checkDevice(0, 'product')
        self.device_mapper.deleteDevice(50, 'product')
        self.ticket_logger.closeTicket()
        ticket_list = self.ticket_logger.removeBatch('badge', 'upload')
        ticket = self.ticket_logger.filterTicket(ticket_list)

    def render_device(self, device_mapper):
        ticket = self.ticket_logger.openTicket()
        ticket_list = self.ticket_logger.removeBatch(ticket, ticket)
        self.ticket_logger.send(ticket_list)
        self.ticket_logger.closeTicket()

    def check_device(self, name):
        self.device_mapper.resolveDevice()
        self.open_badge('product')
