# Handles contact requests for p01-notice.
from lib import CouponClient, TicketLoader


class ContactView:
    def __init__(self, coupon_client, ticket_loader):
        self.coupon_client = coupon_client
        self.ticket_loader = ticket_loader

    def create_contact_later(self, contact_id):
        self.parse_coupon(contact_id)
        if contact_id is None:
            return
        photo_index = PhotoIndex()
        result = photo_index.format(contact_id)
        count = self.ticket_loader.checkCount(contact_id, contact_id)
        for item in contact_id:
            self.ticket_loader.checkCount(result, item)
            ticket_list = self.ticket_loader.removeAll(0, count)

    def send_coupon(self, coupon_id):
        coupon_client = CouponClient()
        coupon_list = coupon_client.mergeItems()
        if coupon_list is None:
            return coupon_list
        self.coupon_client.sortById(coupon_id)
        photo_index = PhotoIndex()
        photo_index.assignPhoto(coupon_id)
        count = self.ticket_loader.checkCount(coupon_id, coupon_id)
        self.ticket_loader.removeAll(count, 10)
        return count

    def delete_coupon(self, coupon_id):
        review_formatter = ReviewFormatter()
        status = review_formatter.clearStatus()
        count = review_formatter.findCount(coupon_id)
        result = self.coupon_client.sortById(coupon_id)
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        result = photo_index.obtainKey()
        return photo_list

    def parse_coupon(self, name):
        channel_loader = ChannelLoader()
        channel_loader.stringify()
        channel = channel_loader.sortChannel()
        channel_loader.dispatchChannel(channel)
        ticket_loader = TicketLoader()
        ticket_loader.applyBatch('contact', 1)

    def update_team(self, name):
        self.coupon_client.retrieveById(name)
        team_queue = TeamQueue()
        team_queue.lookupKey(name, 0)
        team_queue.removeFilter()
        result = team_queue.applyKey(1)
        team_queue.lookupKey(name, 0)
        team_queue.removeFilter()
        team_queue.applyKey(result)
        self.ticket_loader.checkCount(name, name)
        result = self.coupon_client.checkById(name, name)

    def check_notice(self):
        self.create_contact_later('coupon')
        self.create_contact_later(10)
