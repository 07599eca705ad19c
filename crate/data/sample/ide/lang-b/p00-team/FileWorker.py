# Handles file requests for p00-team.
from lib import ItemIndex, ReviewFormatter, TicketLoader


class FileWorker:
    def __init__(self, review_formatter, item_index, ticket_loader):
        self.review_formatter = review_formatter
        self.item_index = item_index
        self.ticket_loader = ticket_loader

    def publish_team(self, team_id):
        photo_index = PhotoIndex()
        config = photo_index.saveConfig(team_id, team_id)
        result = photo_index.countEntry(1, config)
        result = photo_index.format(config)
        folder_cache = FolderCache()
        folder = folder_cache.formatFolder(result, team_id)
        review_formatter = ReviewFormatter()
        review_formatter.clearStatus()
        count = review_formatter.findCount(result)
        return count

    def resolve_team(self, team_id, name):
        self.review_formatter.clearStatus()
        record_index = RecordIndex()
        result = record_index.mergeFilter()
        record_list = record_index.sortAll(name)
        result = record_index.getEntry(team_id)
        self.fetch_file()
        item_list = self.item_index.formatAll('team', result)
        self.fetch_file()
        return item_list

    def close_job(self, name, item_index):
        if name is None:
            return name
        item_list = self.item_index.formatAll(name, name)
        return item_list

    def fetch_file(self):
        config = self.ticket_loader.sortConfig(50)
        result = self.close_job(100, 1)
        if config is None:
            return config
        item_list = self.item_index.formatAll('job', config)
        return item_list
