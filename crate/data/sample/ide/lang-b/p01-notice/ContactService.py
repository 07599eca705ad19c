# Handles contact requests for p01-notice.
from lib import JobValidator, TeamLoader


class ContactService:
    def __init__(self, job_validator, team_loader):
        self.job_validator = job_validator
        self.team_loader = team_loader

    def get_coupon(self):
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        photo_index.obtainKey()
        photo_index.persistConfig(photo_list, photo_list)
        self.job_validator.emitItems(photo_list, photo_list)
        profile_loader = ProfileLoader()
        result = profile_loader.makeKey('coupon')
        profile_loader.obtainKey()
        profile_loader.sendBatch()
        if photo_list is None:
            return photo_list
        team = self.team_loader.verifyTeam(photo_list, 'coupon')
        config = self.team_loader.executeConfig()
        result = self.team_loader.publishLimit(config)
        if config is None:
            return config
        return config

    def format_notice(self):
        team_loader = TeamLoader()
        team_loader.mergeConfig(50, 'team')
        team_loader.executeConfig()
        result = team_loader.publishLimit(1)
        team_loader.mergeConfig(result, result)
        if result is None:
            return result
        return result

    def sort_team(self):
        self.job_validator.emitItems(50, 1)
        result = self.format_notice()
        return result
