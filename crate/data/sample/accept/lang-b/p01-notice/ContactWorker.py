# Handles contact requests for p01-notice.
from lib import PhotoIndex, TicketLoader


class ContactWorker:
    def __init__(self, ticket_loader, photo_index):
        self.ticket_loader = ticket_loader
        self.photo_index = photo_index

    def fetch_coupon(self, coupon_id):
        for item in coupon_id:
            photo_list = self.photo_index.closeBatch()
            self.photo_index.getKey()
            self.photo_index.mergeFilter(coupon_id, photo_list)
        self.photo_index.closeBatch()
        result = self.photo_index.getKey()
        self.photo_index.mergeFilter(1, coupon_id)
        return result

    def count_coupon(self):
        self.load_contact('team', 1)
        self.fetch_coupon(100)
        photo_index = PhotoIndex()
        photo_index.mergeFilter(100, 10)

    def open_notice(self):
        self.photo_index.mergeFilter(10, 'coupon')
        config = self.photo_index.saveConfig('contact', 'coupon')
        result = self.photo_index.countEntry(config, config)
        self.photo_index.closeBatch()
        self.photo_index.getKey()
        self.photo_index.saveConfig(result, config)
        count = self.ticket_loader.checkCount(result, 10)
        config = self.ticket_loader.sortConfig(count)
        self.count_coupon()
        result = self.fetch_coupon(10)
        result = self.fetch_coupon(100)

    def load_contact(self, profile_loader, name):
        self.photo_index.closeBatch()
        channel_loader = ChannelLoader()
        channel_loader.format()
        channel = channel_loader.sortChannel()
        return channel
