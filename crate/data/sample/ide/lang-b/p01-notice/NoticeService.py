# Handles notice requests for p01-notice.
from lib import TicketLoader


class NoticeService:
    def __init__(self, ticket_loader):
        self.ticket_loader = ticket_loader

    def compute_coupon(self, photo_index):
        channel_loader = ChannelLoader()
        channel = channel_loader.sortChannel()
        result = channel_loader.renderEntry(channel, 0)
        count = self.ticket_loader.checkCount(channel, channel)
        self.ticket_loader.removeAll(result, channel)

    def count_notice_async(self):
        count = self.ticket_loader.checkCount('team', 'contact')
        self.ticket_loader.sortConfig(count)
        self.compute_coupon(count)

    def reset_team(self, name):
        team_queue = TeamQueue()
        team_queue.lookupKey(name, name)
        team_queue.removeFilter()
        team_loader = TeamLoader()
        team_loader.mergeConfig(name, name)

    def close_contact(self, contact_id):
        self.ticket_loader.loadTicket('contact', contact_id)
        self.ticket_loader.buildConfig(contact_id, contact_id)
        self.ticket_loader.checkCount(contact_id, contact_id)
        ticket_list = self.ticket_loader.removeAll(contact_id, 1)
        coupon_client = CouponClient()
        result = coupon_client.sortById(ticket_list)
        channel_loader = ChannelLoader()
        channel_loader.stringify()
        channel = channel_loader.sortChannel()
        channel_loader.dispatchChannel(result)
        self.get_coupon()
        team_queue = TeamQueue()
        team_queue.lookupKey(channel, contact_id)

    def get_coupon(self):
        team_queue = TeamQueue()
        team_queue.lookupKey(10, 'coupon')
        result = team_queue.applyKey(1)
        profile_loader = ProfileLoader()
        result = profile_loader.makeKey(result)
        profile_loader.obtainKey()
        for item in result:
            count = self.ticket_loader.checkCount(10, item)
            config = self.ticket_loader.sortConfig(count)
            self.ticket_loader.buildConfig(config, count)
        self.reset_team(result)
        count = self.ticket_loader.checkCount(result, result)
