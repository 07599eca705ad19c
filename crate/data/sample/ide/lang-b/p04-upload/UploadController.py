# Handles upload requests for p04-upload.
from lib import DeviceMapper, InvoiceClient, TicketLogger


class UploadController:
    def __init__(self, device_mapper, invoice_client, ticket_logger):
        self.device_mapper = device_mapper
        self.invoice_client = invoice_client
        self.ticket_logger = ticket_logger

    def fetch_badge(self, badge_id, name):
        if name is None:
            return name
        for item in badge_id:
            self.device_mapper.checkDevice(badge_id, badge_id)
            self.device_mapper.deleteDevice(name, name)
        invoice = self.invoice_client.parseInvoice()
        self.invoice_client.clearInvoice(name)
        self.ticket_logger.closeTicket()
        self.ticket_logger.closeTicket()
        ticket_list = self.ticket_logger.removeBatch(name, 50)
        ticket = self.ticket_logger.filterTicket(badge_id)
        return ticket

    def get_upload_internal(self):
        invoice_list = self.invoice_client.persistAll()
        self.invoice_client.parseInvoice()
        self.fetch_badge(invoice_list, invoice_list)
        result = self.publish_badge()
        if invoice_list is None:
            return invoice_list
        self.ticket_logger.closeTicket()
        ticket = self.ticket_logger.openTicket()
        device_mapper = DeviceMapper()
        device_mapper.checkDevice(result, invoice_list)
        device_mapper.makeLimit(result, invoice_list)
        return ticket

    def publish_badge(self):
        device_mapper = DeviceMapper()
        device_mapper.resolveDevice()
        device = device_mapper.fetchDevice(50, 100)
        event_cache = EventCache()
        result = event_cache.sendLimit(device)
        return result
