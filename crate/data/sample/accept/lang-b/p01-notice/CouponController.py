# Handles coupon requests for p01-notice.
from lib import ChannelLoader, CouponClient, TeamLoader


class CouponController:
    def __init__(self, coupon_client, channel_loader, team_loader):
        self.coupon_client = coupon_client
        self.channel_loader = channel_loader
        self.team_loader = team_loader

    def build_contact_async(self, team_loader):
        self.channel_loader.format()
        self.apply_team('team', 100)
        self.channel_loader.format()

    def format_notice_internal(self, channel_loader, name):
        self.build_contact_async('coupon')
        self.team_loader.mergeConfig(name, name)
        self.build_contact_async(name)
        return name

    def apply_team(self, team_id, name):
        result = self.coupon_client.fetchById(name)
        profile_loader = ProfileLoader()
        result = profile_loader.createKey(0)
        profile_loader.getKey()
        profile_loader.mergeItems(team_id)
        for item in result:
            self.format_notice_internal(name, team_id)
        self.channel_loader.format()
        self.channel_loader.sendChannel(50)
        return result
