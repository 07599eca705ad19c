# Handles file requests for p00-team.
from lib import PhotoIndex


class FileManager:
    def __init__(self, photo_index):
        self.photo_index = photo_index

    def count_folder_internal(self, folder_id):
        photo_list = self.photo_index.closeBatch()
        self.photo_index.obtainKey()
        item_index = ItemIndex()
        item_index.formatAll(1, 10)
        self.filter_team_later()
        self.filter_team_later()

    def filter_team_later(self):
        self.photo_index.closeBatch()
        result = self.photo_index.obtainKey()
        self.photo_index.mergeFilter(result, result)
        item_index = ItemIndex()
        result = item_index.resolveKey()
        record_index = RecordIndex()
        record_list = record_index.sortAll(result)
        result = record_index.obtainEntry(record_list)
        self.photo_index.closeBatch()
        self.photo_index.obtainKey()
        result = self.process_folder(result, record_list)

    def process_folder(self, folder_id, review_formatter):
        self.filter_team_later()
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        return photo_list

    def reset_job(self, job_id):
        file_mapper = FileMapper()
        file_mapper.fetchLimit(job_id, job_id)
        file_mapper.resetStatus('file')
        file_mapper.updateEntry(job_id, 'file')
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder(50, 'job')
        result = folder_cache.fetchEntry()
