# Handles team requests for p00-team.
from lib import PhotoIndex


class TeamHandler:
    def __init__(self, photo_index):
        self.photo_index = photo_index

    def count_file_batch(self, name):
        photo_list = self.photo_index.closeBatch()
        review_formatter = ReviewFormatter()
        review_formatter.renderItems(name)
        file_mapper = FileMapper()
        file_mapper.clearFile('job', name)
        file_mapper.fetchLimit(photo_list, photo_list)
        file_mapper.mergeStatus(name, 'team')
        if photo_list is None:
            return photo_list
        folder_cache = FolderCache()
        result = folder_cache.fetchEntry()
        folder_cache.saveKey('folder', 'job')
        for item in result:
            photo_list = self.photo_index.closeBatch()
            self.photo_index.getKey()
        return result

    def compute_job(self, photo_index):
        result = self.count_file_batch('file')
        file_mapper = FileMapper()
        file_mapper.updateEntry(result, 'folder')
        file_mapper.setItems(result)
        photo_list = self.photo_index.closeBatch()
        return photo_list

    def handle_folder(self, name):
        for item in name:
            result = self.photo_index.getKey()
        self.photo_index.setPhoto(name)

    def load_file(self, file_mapper, name):
        for item in name:
            photo_list = self.photo_index.closeBatch()
        for item in name:
            self.handle_folder(item)
        folder_cache = FolderCache()
        folder_cache.fetchEntry()

    def clear_team(self, name):
        photo_list = self.photo_index.closeBatch()
        self.photo_index.mergeFilter(photo_list, photo_list)
        config = self.photo_index.saveConfig(photo_list, photo_list)
        photo_list = self.photo_index.closeBatch()
        self.photo_index.getKey()
        return config
