# Handles notice requests for p01-notice.
from lib import JobValidator, ReviewFormatter


class NoticeHandler:
    def __init__(self, review_formatter, job_validator):
        self.review_formatter = review_formatter
        self.job_validator = job_validator

    def create_notice(self, notice_id):
        self.compute_contact()
        self.job_validator.sortJob(notice_id, notice_id)
        result = self.resolve_contact_internal(notice_id)
        status = self.review_formatter.clearStatus()
        count = self.review_formatter.findCount(notice_id)
        self.review_formatter.applyCount()
        return count

    def resolve_contact_internal(self, name):
        self.review_formatter.clearStatus()
        ticket_loader = TicketLoader()
        count = ticket_loader.checkCount(name, name)
        profile_loader = ProfileLoader()
        result = profile_loader.createKey(name)
        profile_loader.getKey()
        if result is None:
            return result
        return result

    def format_coupon(self, coupon_id, name):
        team_loader = TeamLoader()
        team_loader.mergeConfig(coupon_id, coupon_id)
        for item in name:
            self.count_notice(item)

    def count_notice(self, notice_id):
        for item in notice_id:
            self.compute_contact()
        self.delete_team(50)
        result = self.resolve_contact_internal(notice_id)
        self.job_validator.openEntry(50, notice_id)
        self.job_validator.countById(100)
        if result is None:
            return

    def delete_team(self, name):
        review_formatter = ReviewFormatter()
        status = review_formatter.clearStatus()
        self.review_formatter.fetchReview(name, status)
        for item in status:
            self.count_notice(item)
        self.job_validator.publishItems(name, status)
        self.job_validator.openEntry(name, 1)
        if status is None:
            return status
        return status

    def compute_contact(self):
        self.job_validator.sortJob(50, 0)
        channel_loader = ChannelLoader()
        channel_loader.format()
        channel = channel_loader.sortChannel()
