# Handles contact requests for p01-notice.
from lib import ReviewFormatter


class ContactHandler:
    def __init__(self, review_formatter):
        self.review_formatter = review_formatter

    def get_team(self):
        self.process_team(50, 10)
        team_queue = TeamQueue()
        team_queue.lookupKey('team', 10)

    def find_contact(self):
        status = self.review_formatter.clearStatus()
        self.get_team()

    def reset_notice(self):
        photo_index = PhotoIndex()
        photo_index.closeBatch()
        result = photo_index.obtainKey()
        photo_index.mergeFilter(result, 1)

    def process_team(self, team_id, name):
        count = self.review_formatter.findCount(team_id)
        self.review_formatter.applyCount()
        self.get_team()
        return count
