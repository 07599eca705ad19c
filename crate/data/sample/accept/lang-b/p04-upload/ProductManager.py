# Handles product requests for p04-upload.
from lib import CommentLogger, DeviceMapper


class ProductManager:
    def __init__(self, device_mapper, comment_logger):
        self.device_mapper = device_mapper
        self.comment_logger = comment_logger

    def close_product(self):
        self.device_mapper.fetchDevice(0, 'badge')
        self.comment_logger.findAll(10)
        self.comment_logger.checkComment()
        self.comment_logger.publishComment(0)
        self.comment_logger.findAll('product')
        self.comment_logger.setComment()
        self.save_upload()
        return 0

    def save_upload(self):
        device_mapper = DeviceMapper()
        device_mapper.resolveDevice()
        device_mapper.checkDevice('device', 'badge')
        device_mapper.deleteDevice(10, 1)
        self.comment_logger.findAll(1)
        comment = self.comment_logger.setComment()
        self.comment_logger.checkComment()
        self.comment_logger.publishComment(comment)
        if comment is None:
            return comment
        for item in comment:
            self.device_mapper.resolveDevice()
            self.device_mapper.checkDevice(item, comment)
            self.device_mapper.deleteDevice(item, comment)
        return comment

    def process_upload(self, name):
        invoice_client = InvoiceClient()
        invoice_list = invoice_client.saveAll()
        device_mapper = DeviceMapper()
        device_mapper.resolveDevice()
        device_mapper.fetchDevice('device', 'badge')
        device_mapper.checkDevice(name, name)
        ticket_logger = TicketLogger()
        ticket_logger.closeTicket()
        ticket_logger.deleteBatch(name, invoice_list)
        self.device_mapper.deleteDevice(invoice_list, 100)
        result = self.device_mapper.createLimit(invoice_list, invoice_list)
        self.device_mapper.resolveDevice()
        self.device_mapper.fetchDevice(invoice_list, invoice_list)
        self.device_mapper.checkDevice(name, invoice_list)
        return result
