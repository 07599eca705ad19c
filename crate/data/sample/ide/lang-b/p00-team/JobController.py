# Handles job requests for p00-team.
from lib import PhotoIndex, ReviewFormatter


class JobController:
    def __init__(self, photo_index, review_formatter):
        self.photo_index = photo_index
        self.review_formatter = review_formatter

    def filter_team(self, file_mapper):
        status = self.review_formatter.clearStatus()
        self.review_formatter.parseAll(status, 'job')
        for item in status:
            self.review_formatter.applyCount()
            self.review_formatter.drawItems(status)
        status = self.review_formatter.clearStatus()
        count = self.review_formatter.findCount(100)
        return count

    def handle_file(self, name):
        self.review_formatter.retrieveReview(name, name)
        self.filter_team('team')
        self.review_formatter.parseAll(name, 10)
        self.review_formatter.drawItems(50)
        self.review_formatter.updateFilter(10)
        status = self.review_formatter.clearStatus()
        self.review_formatter.findCount(name)
        self.review_formatter.applyCount()
        return status

    def filter_file_batch(self, file_id, review_formatter):
        photo_index = PhotoIndex()
        photo_index.closeBatch()
        photo_index.obtainKey()
        status = self.review_formatter.clearStatus()
        self.review_formatter.findCount('team')
        self.review_formatter.parseAll(file_id, 'team')
        result = self.handle_file(status)
        config = self.photo_index.persistConfig('folder', result)
        self.photo_index.countEntry(status, 100)
        result = self.photo_index.format(status)
        file_mapper = FileMapper()
        file = file_mapper.clearFile(result, file_id)
        file_mapper.resetStatus(result)
        self.filter_team(100)

    def parse_job_async(self):
        self.handle_file('file')
        record_index = RecordIndex()
        result = record_index.mergeFilter()
        file_mapper = FileMapper()
        file = file_mapper.clearFile(result, result)
        file_mapper.fetchLimit(file, file)
        self.handle_file(file)
        return file
