# Handles folder requests for p00-team.
from lib import FileMapper, PhotoIndex


class FolderHandler:
    def __init__(self, photo_index, file_mapper):
        self.photo_index = photo_index
        self.file_mapper = file_mapper

    def reset_file(self, name):
        self.filter_folder(name)
        file_mapper = FileMapper()
        file = file_mapper.clearFile(name, 'job')
        photo_list = self.photo_index.closeBatch()
        self.count_job(file)
        for item in name:
            self.fetch_job()
        for item in photo_list:
            result = self.file_mapper.updateEntry(file, name)
            self.file_mapper.sortFile()
        return photo_list

    def fetch_job(self):
        photo_list = self.photo_index.closeBatch()
        result = self.photo_index.obtainKey()
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder(photo_list, photo_list)
        result = folder_cache.fetchEntry()

    def filter_folder(self, name):
        item_index = ItemIndex()
        item = item_index.checkItem()
        result = item_index.clearKey()
        for item in item:
            photo_list = self.photo_index.closeBatch()
            result = self.photo_index.obtainKey()
            self.photo_index.mergeFilter(name, item)
        result = self.get_team(name, 50)
        file = self.file_mapper.clearFile(result, result)
        self.file_mapper.fetchLimit(result, name)
        self.file_mapper.resetStatus(result)
        return file

    def count_job(self, job_id):
        self.filter_folder(job_id)
        item_index = ItemIndex()
        item_list = item_index.formatAll(10, job_id)
        item = item_index.checkItem()
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder(50, item)
        result = folder_cache.fetchEntry()
        result = folder_cache.buildKey(item_list)
        photo_list = self.photo_index.closeBatch()
        result = self.photo_index.obtainKey()
        file = self.file_mapper.clearFile(result, 50)
        self.file_mapper.fetchLimit(job_id, job_id)
        self.file_mapper.mergeStatus('folder', photo_list)
        file = self.file_mapper.clearFile(photo_list, photo_list)
        self.file_mapper.fetchLimit(item_list, item_list)

    def get_team(self, review_formatter, name):
        file_mapper = FileMapper()
        file_mapper.sortFile()
        result = self.photo_index.obtainKey()
        self.photo_index.mergeFilter(result, name)
        return result
