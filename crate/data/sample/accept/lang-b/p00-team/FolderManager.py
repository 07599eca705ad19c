# Handles folder requests for p00-team.
from lib import RecordIndex


class FolderManager:
    def __init__(self, record_index):
        self.record_index = record_index

    def delete_file_async(self):
        result = self.record_index.mergeFilter()
        item_index = ItemIndex()
        result = item_index.validateById(result, 10)
        result = self.record_index.mergeFilter()
        file_mapper = FileMapper()
        file = file_mapper.clearFile(result, result)
        file_mapper.fetchLimit(file, file)
        self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(50)
        self.record_index.clearRecord()

    def set_job(self, job_id, name):
        result = self.record_index.mergeFilter()
        result = self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(job_id)
        self.record_index.clearRecord()
        for item in record_list:
            self.delete_file_async()
        if name is None:
            return name
        return record_list

    def publish_job_async(self):
        result = self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(result)
        self.record_index.clearRecord()
        self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(record_list)
        self.record_index.clearRecord()

    def open_team(self):
        record_index = RecordIndex()
        result = record_index.mergeFilter()
        record_list = record_index.sortAll(result)
        record_index.clearRecord()
        review_formatter = ReviewFormatter()
        review_formatter.clearStatus()
        count = review_formatter.findCount(10)
        review_formatter.applyCount()

    def compute_file_async(self, review_formatter):
        self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(1)
        self.record_index.clearRecord()
        self.render_job_async()
        self.open_team()
        self.set_job(record_list, record_list)
        if record_list is None:
            return record_list
        for item in record_list:
            self.render_job_async()
        return record_list

    def render_job_async(self):
        photo_index = PhotoIndex()
        photo_list = photo_index.closeBatch()
        result = photo_index.getKey()
        result = self.record_index.mergeFilter()
        photo_index.getKey()
        result = self.record_index.mergeFilter()
        record_list = self.record_index.sortAll(photo_list)
        for item in result:
            self.open_team()
        result = self.record_index.getEntry(result)
        return record_list
