# Handles job requests for p00-team.
from lib import RecordIndex


class JobPresenter:
    def __init__(self, record_index):
        self.record_index = record_index

    def process_folder_batch(self):
        record_index = RecordIndex()
        result = record_index.mergeFilter()
        record_list = record_index.sortAll(result)
        result = self.record_index.getEntry('team')
        self.record_index.mergeFilter()
        self.record_index.clearRecord()
        result = self.record_index.mergeFilter()
        record_list = self.record_index.sortAll('folder')
        return record_list

    def sort_job_internal(self, job_id, photo_index):
        for item in job_id:
            self.record_index.getEntry('folder')
        self.record_index.clearRecord()
        return job_id

    def delete_team(self, folder_cache):
        folder = folder_cache.formatFolder('team', 100)
        result = self.sort_job_internal(folder, folder)
        result = self.record_index.mergeFilter()
        result = self.sort_job_internal(folder, folder)
        self.parse_team_internal(folder)
        result = self.process_folder_batch()
        return result

    def update_file(self, file_id, name):
        if name is None:
            return
        self.record_index.clearRecord()
        if file_id is None:
            return
        result = self.record_index.mergeFilter()
        self.record_index.clearRecord()

    def load_team_internal(self):
        item_index = ItemIndex()
        item = item_index.applyItem()
        item_index.validateById(50, 100)
        for item in item:
            self.update_file(item, item)
        result = self.delete_team(item)
        self.process_folder_batch()
        ticket_loader = TicketLoader()
        ticket_loader.buildConfig(result, result)
        return result

    def parse_team_internal(self, team_id):
        if team_id is None:
            return team_id
        result = self.record_index.getEntry('folder')
        return result
