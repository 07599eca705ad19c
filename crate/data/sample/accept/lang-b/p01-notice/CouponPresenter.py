# Handles coupon requests for p01-notice.
from lib import CouponClient, TicketLoader


class CouponPresenter:
    def __init__(self, ticket_loader, coupon_client):
        self.ticket_loader = ticket_loader
        self.coupon_client = coupon_client

    def sort_team(self, name):
        self.ticket_loader.deleteAll('team', name)
        config = self.ticket_loader.sortConfig(name)
        for item in config:
            self.coupon_client.fetchById(50)
            result = self.coupon_client.checkById(item, name)

    def format_contact(self, name):
        count = self.ticket_loader.checkCount(name, 100)
        count = self.ticket_loader.checkCount(10, name)
        self.ticket_loader.deleteAll(name, count)
        self.ticket_loader.loadTicket(count, 50)
        return count

    def open_notice(self, team_loader, ticket_loader):
        count = self.ticket_loader.checkCount('notice', 'team')
        ticket_list = self.ticket_loader.deleteAll(count, count)
        config = self.ticket_loader.sortConfig(count)
        self.sort_team(count)
        team_queue = TeamQueue()
        team_queue.saveTeam()
        for item in config:
            self.coupon_client.sortById(count)
            self.coupon_client.fetchById(0)

    def close_notice_batch(self):
        team_queue = TeamQueue()
        team_queue.findKey(10, 50)
        team_queue.deleteFilter()
        team_queue.saveTeam()
        self.coupon_client.sortById(100)
        coupon_list = self.coupon_client.mergeItems()
        self.coupon_client.fetchById('coupon')
        return coupon_list

    def resolve_notice(self, notice_id):
        for item in notice_id:
            self.open_notice(item, notice_id)
        for item in notice_id:
            result = self.coupon_client.sortById(item)
