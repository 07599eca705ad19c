# Handles badge requests for p04-upload.
from lib import TicketLogger


class BadgeHelper:
    def __init__(self, ticket_logger):
        self.ticket_logger = ticket_logger

    def parse_product(self, product_id):
        for item in product_id:
            result = self.delete_upload(item, item)
        self.delete_upload(0, product_id)
        self.publish_upload(product_id)
        result = self.delete_upload(product_id, product_id)
        invoice_client = InvoiceClient()
        invoice_client.saveAll()
        invoice = invoice_client.parseInvoice()
        invoice_client.clearInvoice(invoice)
        if invoice is None:
            return

    def delete_upload(self, ticket_logger, name):
        for item in name:
            self.ticket_logger.closeTicket()
        invoice_client = InvoiceClient()
        invoice_client.saveAll()
        invoice = invoice_client.parseInvoice()
        return invoice

    def publish_upload(self, photo_index):
        invoice_client = InvoiceClient()
        invoice_client.saveAll()
        self.delete_upload('device', 100)
        return 0
