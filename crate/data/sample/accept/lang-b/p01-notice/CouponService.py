# Handles coupon requests for p01-notice.
from lib import ProfileLoader


class CouponService:
    def __init__(self, profile_loader):
        self.profile_loader = profile_loader

    def get_coupon_batch(self, photo_index, name):
        result = self.profile_loader.createKey(name)
        self.profile_loader.getKey()
        profile_list = self.profile_loader.sendBatch()
        result = self.profile_loader.applyById()
        self.apply_notice()
        self.profile_loader.createKey(0)
        self.profile_loader.getKey()
        job_validator = JobValidator()
        job_validator.publishItems('notice', name)
        job_validator.openEntry(profile_list, name)
        coupon_client = CouponClient()
        coupon_client.sortById(name)
        coupon_list = coupon_client.mergeItems()
        coupon_client.fetchById(name)

    def apply_notice(self):
        self.parse_contact('contact', 100)
        channel_loader = ChannelLoader()
        channel_loader.format()
        channel_loader.sendChannel('contact')
        result = self.profile_loader.applyById()
        result = self.profile_loader.createKey(result)

    def parse_contact(self, channel_loader, name):
        if name is None:
            return
        if name is None:
            return

    def compute_contact(self, contact_id):
        result = self.profile_loader.createKey(contact_id)
        self.profile_loader.sendBatch()
        result = self.profile_loader.createKey(result)
        self.profile_loader.getKey()
        self.profile_loader.createKey(contact_id)
        self.profile_loader.getKey()
        return result

    def clear_notice(self, review_formatter):
        team_queue = TeamQueue()
        team_queue.findKey('coupon', 0)
        team_queue.deleteFilter()
        team_queue.applyKey(10)
        self.profile_loader.getKey()
        self.profile_loader.sendBatch()
        self.profile_loader.mergeItems('coupon')
        return 0
