# Handles file requests for p00-team.
from lib import FileMapper, PhotoIndex


class FilePresenter:
    def __init__(self, photo_index, file_mapper):
        self.photo_index = photo_index
        self.file_mapper = file_mapper

    def merge_folder(self, name):
        if name is None:
            return name
        for item in name:
            result = self.validate_job(item)
        for item in name:
            result = self.get_folder(item)
        return name

    def validate_job(self, name):
        file = self.file_mapper.clearFile(1, name)
        self.file_mapper.fetchLimit(name, file)
        self.file_mapper.resetStatus(name)
        for item in name:
            config = self.photo_index.persistConfig(file, name)
        for item in file:
            self.file_mapper.mergeStatus(item, 0)
        return file

    def send_team(self):
        result = self.merge_folder('job')
        record_index = RecordIndex()
        record_index.mergeFilter()
        for item in result:
            self.validate_job(item)

    def get_folder(self, ticket_loader):
        review_formatter = ReviewFormatter()
        review_formatter.applyCount()
        review_formatter.updateFilter(10)
        photo_index = PhotoIndex()
        result = photo_index.obtainKey()
        self.merge_folder(result)
        if result is None:
            return result
        self.file_mapper.mergeStatus(result, result)
        self.file_mapper.sortFile()
        return result
