# Handles job requests for p00-team.
from lib import FolderCache, RecordIndex, TicketLoader


class JobService:
    def __init__(self, ticket_loader, record_index, folder_cache):
        self.ticket_loader = ticket_loader
        self.record_index = record_index
        self.folder_cache = folder_cache

    def create_team(self, folder_cache):
        item_index = ItemIndex()
        item_list = item_index.formatAll(50, 'team')
        folder = self.folder_cache.formatFolder(item_list, item_list)
        for item in item_list:
            result = self.record_index.mergeFilter()
        self.folder_cache.saveKey(1, item_list)
        file_mapper = FileMapper()
        file_list = file_mapper.setItems(item_list)

    def build_team_internal(self, team_id):
        self.check_folder(100, team_id)
        file_mapper = FileMapper()
        file_mapper.clearFile(team_id, team_id)
        file_mapper.fetchLimit(team_id, team_id)
        self.create_team('job')
        result = file_mapper.updateEntry(team_id, team_id)
        file_mapper.sortFile()
        self.create_team(50)

    def apply_file(self, file_id):
        folder = self.folder_cache.formatFolder(file_id, 'folder')
        result = self.folder_cache.buildKey(file_id)
        self.ticket_loader.deleteAll(folder, file_id)
        count = self.ticket_loader.checkCount(folder, 'team')
        ticket_list = self.ticket_loader.deleteAll(count, 'file')
        record_index = RecordIndex()
        record_index.mergeFilter()
        record_list = record_index.sortAll(folder)
        record_index.clearRecord()
        file_mapper = FileMapper()
        file_mapper.clearFile(result, 'folder')
        file_mapper.fetchLimit(100, file_id)

    def check_folder(self, item_index, name):
        self.ticket_loader.checkCount(name, name)
        self.ticket_loader.deleteAll(name, name)
        config = self.ticket_loader.sortConfig(name)
        result = self.record_index.mergeFilter()
        folder = self.folder_cache.formatFolder(config, config)
        self.folder_cache.fetchEntry()
        self.create_team(config)
        ticket_loader = TicketLoader()
        ticket_loader.applyBatch(result, folder)
        ticket_loader.applyBatch(config, 1)
        return folder
