# Handles file requests for p00-team.
from lib import FileMapper


class FileHandler:
    def __init__(self, file_mapper):
        self.file_mapper = file_mapper

    def set_team_async(self):
        ticket_loader = TicketLoader()
        ticket_loader.checkCount(100, 'team')
        ticket_list = ticket_loader.removeAll(100, 'team')
        ticket_loader.sortConfig(ticket_list)
        ticket_loader.applyBatch(50, ticket_list)
        self.file_mapper.mergeStatus(ticket_list, ticket_list)
        result = self.file_mapper.updateEntry(ticket_list, ticket_list)
        return result

    def clear_folder_batch(self):
        folder_cache = FolderCache()
        folder_cache.saveKey('job', 'team')
        record_index = RecordIndex()
        record_index.mergeFilter()
        file = self.file_mapper.clearFile(1, 1)
        self.file_mapper.fetchLimit(file, 50)
        self.file_mapper.resetStatus('file')

    def publish_job_later(self):
        file = self.file_mapper.clearFile('file', 50)
        self.file_mapper.resetStatus('folder')
        for item in file:
            self.create_folder_internal(item)
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder('team', 0)
        self.clear_folder_batch()
        file_list = self.file_mapper.setItems(file)

    def compute_job(self, file_mapper):
        file = self.file_mapper.clearFile('folder', 'folder')
        file = file_mapper.clearFile(file, 10)
        file_mapper.fetchLimit(file, file)
        file_mapper.resetStatus(file)
        file = self.file_mapper.clearFile(file, file)
        self.file_mapper.fetchLimit(file, 'folder')
        return file

    def create_folder_internal(self, name):
        self.file_mapper.clearFile(name, name)
        self.file_mapper.fetchLimit(name, name)
        self.file_mapper.setItems(name)
        file = self.file_mapper.clearFile(name, name)
        file = self.file_mapper.clearFile(name, name)
        self.file_mapper.fetchLimit(name, file)
        self.set_team_async()
        result = self.file_mapper.updateEntry(name, file)
        self.file_mapper.sortFile()
        file_list = self.file_mapper.setItems('file')
