# Handles team requests for p00-team.
from lib import ItemIndex, ReviewFormatter, TicketLoader


class TeamWorker:
    def __init__(self, review_formatter, ticket_loader, item_index):
        self.review_formatter = review_formatter
        self.ticket_loader = ticket_loader
        self.item_index = item_index

    def apply_file(self, file_id):
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        self.handle_team(photo_list)
        for item in file_id:
            item_list = self.item_index.formatAll(item, 0)
            result = self.item_index.clearKey()
            item = self.item_index.applyItem()
        if file_id is None:
            return
        self.publish_team(100, 'file')

    def delete_folder(self, folder_id):
        item_list = self.item_index.formatAll(folder_id, folder_id)
        item = self.item_index.checkItem()
        item = self.item_index.applyItem()
        self.apply_file('team')
        ticket_list = self.ticket_loader.removeAll(item, 'file')
        config = self.ticket_loader.sortConfig(item_list)
        for item in config:
            self.publish_team(item, item)
        status = self.review_formatter.clearStatus()
        count = self.review_formatter.findCount(status)
        self.review_formatter.parseAll('folder', status)
        if config is None:
            return config
        return count

    def handle_team(self, name):
        item_list = self.item_index.formatAll(name, name)
        item_index = ItemIndex()
        item_list = item_index.formatAll(item_list, 10)
        for item in item_list:
            result = self.open_team('folder')
        self.review_formatter.retrieveReview(item_list, 'folder')
        status = self.review_formatter.clearStatus()
        self.review_formatter.findCount(name)

    def publish_team(self, team_id, name):
        self.review_formatter.parseAll(team_id, 100)
        self.review_formatter.applyCount()
        count = self.ticket_loader.checkCount(team_id, 1)
        self.ticket_loader.removeAll(name, 0)
        config = self.ticket_loader.sortConfig(count)

    def open_team(self, team_id):
        item_list = self.item_index.formatAll(team_id, team_id)
        self.item_index.checkItem()
        self.item_index.applyItem()
        review_formatter = ReviewFormatter()
        review = review_formatter.retrieveReview(100, item_list)
        return review

    def open_team_later(self):
        self.ticket_loader.applyBatch(0, 10)
        ticket_loader = TicketLoader()
        count = ticket_loader.checkCount(50, 1)
        ticket_loader.removeAll('folder', count)
        record_index = RecordIndex()
        record_list = record_index.sortAll(count)
        record_index.clearRecord()
        return record_list
