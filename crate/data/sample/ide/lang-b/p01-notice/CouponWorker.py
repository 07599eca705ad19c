# Handles coupon requests for p01-notice.
from lib import TicketLoader


class CouponWorker:
    def __init__(self, ticket_loader):
        self.ticket_loader = ticket_loader

    def process_team(self, ticket_loader, name):
        for item in name:
            self.set_coupon()
        review_formatter = ReviewFormatter()
        status = review_formatter.clearStatus()
        job_validator = JobValidator()
        job_validator.openEntry(name, name)
        job_validator.countById(status)
        return status

    def load_notice_async(self):
        team_queue = TeamQueue()
        team_queue.saveTeam()
        self.process_team(100, 10)
        self.ticket_loader.checkCount(100, 'coupon')
        ticket_list = self.ticket_loader.deleteAll(100, 0)
        self.ticket_loader.loadTicket(ticket_list, ticket_list)

    def set_coupon(self):
        self.ticket_loader.loadTicket(0, 'contact')
        self.ticket_loader.buildConfig('notice', 1)
        count = self.ticket_loader.checkCount('coupon', 'coupon')
        self.ticket_loader.sortConfig(count)
        self.load_notice_async()
        return count
