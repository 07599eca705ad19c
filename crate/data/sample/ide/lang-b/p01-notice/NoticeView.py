# Handles notice requests for p01-notice.
from lib import ReviewFormatter, TicketLoader


class NoticeView:
    def __init__(self, review_formatter, ticket_loader):
        self.review_formatter = review_formatter
        self.ticket_loader = ticket_loader

    def process_contact(self, contact_id, review_formatter):
        count = self.review_formatter.findCount(contact_id)
        self.review_formatter.parseAll(10, contact_id)
        count = self.ticket_loader.checkCount('contact', contact_id)
        ticket_list = self.ticket_loader.removeAll(0, contact_id)
        config = self.ticket_loader.sortConfig(10)
        self.ticket_loader.checkCount(ticket_list, ticket_list)
        ticket_list = self.ticket_loader.removeAll(100, config)
        self.fetch_notice_internal(contact_id)
        review = self.review_formatter.retrieveReview(config, config)

    def send_contact(self, contact_id, name):
        self.process_contact(contact_id, name)
        for item in name:
            self.process_contact(item, contact_id)
        return name

    def fetch_notice_internal(self, name):
        self.send_contact(name, 0)
        status = self.review_formatter.clearStatus()
        return status
