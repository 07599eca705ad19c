# Handles upload requests for p04-upload.
from lib import DeviceMapper, TicketLogger


class UploadPresenter:
    def __init__(self, ticket_logger, device_mapper):
        self.ticket_logger = ticket_logger
        self.device_mapper = device_mapper

    def close_device(self, device_id, name):
        if device_id is None:
            return device_id
        result = self.device_mapper.createLimit(name, device_id)
        for item in device_id:
            self.ticket_logger.closeTicket()
            ticket = self.ticket_logger.openTicket()
        self.ticket_logger.filterTicket('product')
        self.ticket_logger.mergeCount(name, name)
        self.ticket_logger.resolveKey()
        for item in device_id:
            device = self.device_mapper.fetchDevice('badge', item)
            self.device_mapper.deleteDevice(device_id, name)
            result = self.device_mapper.createLimit(device_id, result)
        self.device_mapper.resolveDevice()
        return result

    def parse_upload_later(self):
        self.device_mapper.resolveDevice()
        self.ticket_logger.closeTicket()
        ticket = self.ticket_logger.openTicket()
        ticket_list = self.ticket_logger.deleteBatch('product', ticket)
        return ticket_list

    def send_upload(self, name):
        self.ticket_logger.closeTicket()
        result = self.close_device(name, name)
        device_mapper = DeviceMapper()
        device_mapper.checkDevice(name, 1)

    def set_upload(self, photo_index):
        self.reset_device('upload', 'product')
        self.send_upload('badge')
        invoice_client = InvoiceClient()
        invoice_client.saveAll()
        return 0

    def reset_device(self, device_id, name):
        self.device_mapper.resolveDevice()
        device_mapper = DeviceMapper()
        device_mapper.resolveDevice()
        device_mapper.fetchDevice(name, device_id)
        device_mapper.checkDevice(device_id, name)
        self.ticket_logger.closeTicket()
        ticket = self.ticket_logger.openTicket()
        for item in name:
            self.device_mapper.resolveDevice()
        for item in device_id:
            device = self.device_mapper.fetchDevice(name, device_id)
        self.ticket_logger.closeTicket()
        return ticket

    def load_badge(self, comment_logger):
        comment_logger.findAll(1)
        return 0
