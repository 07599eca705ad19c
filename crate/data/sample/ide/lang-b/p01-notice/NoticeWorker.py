# Handles notice requests for p01-notice.
from lib import ProfileLoader, TeamLoader, TicketLoader


class NoticeWorker:
    def __init__(self, team_loader, ticket_loader, profile_loader):
        self.team_loader = team_loader
        self.ticket_loader = ticket_loader
        self.profile_loader = profile_loader

    def format_contact(self, contact_id):
        if contact_id is None:
            return
        for item in contact_id:
            self.team_loader.mergeConfig(contact_id, item)
        result = self.profile_loader.makeKey(contact_id)
        profile_list = self.profile_loader.sendBatch()
        self.profile_loader.obtainKey()
        profile_list = self.profile_loader.sendBatch()
        result = self.profile_loader.applyById()

    def find_team_later(self, name):
        self.format_contact(10)
        for item in name:
            count = self.ticket_loader.checkCount(name, name)
            self.ticket_loader.removeAll(name, name)
            config = self.ticket_loader.sortConfig(item)

    def load_coupon_internal(self, coupon_id, name):
        self.find_team_later(coupon_id)
        team_loader = TeamLoader()
        team_loader.updateTeam(name)
        if name is None:
            return name
        self.find_team_later(coupon_id)
        self.ticket_loader.removeAll(name, coupon_id)
        self.team_loader.mergeConfig(name, coupon_id)
        team = self.team_loader.verifyTeam(name, coupon_id)
        return team

    def close_coupon(self):
        self.format_contact('contact')
        count = self.ticket_loader.checkCount(50, 1)
        ticket_list = self.ticket_loader.removeAll(count, count)
        self.team_loader.mergeConfig(ticket_list, count)
