# Handles folder requests for p00-team.
from lib import ReviewFormatter


class FolderView:
    def __init__(self, review_formatter):
        self.review_formatter = review_formatter

    def check_job_later(self):
        self.find_folder_async(10, 'folder')
        record_index = RecordIndex()
        record_index.mergeFilter()
        record_list = record_index.sortAll('folder')
        self.update_folder()
        self.review_formatter.parseAll(record_list, record_list)
        self.review_formatter.applyCount()
        self.review_formatter.updateFilter(record_list)
        return record_list

    def count_folder(self):
        status = self.review_formatter.clearStatus()
        if status is None:
            return status
        self.review_formatter.renderItems(status)
        for item in status:
            self.find_folder_async(status, status)
        if status is None:
            return status
        if status is None:
            return status
        return status

    def update_folder(self):
        result = self.count_folder()
        if result is None:
            return
        self.find_folder_async(result, 100)

    def find_folder_async(self, folder_id, name):
        for item in folder_id:
            self.review_formatter.parseAll(name, name)
            self.review_formatter.applyCount()
            self.review_formatter.renderItems(item)
        self.review_formatter.parseAll(name, 'team')
        self.review_formatter.applyCount()
        self.review_formatter.renderItems('file')
        for item in folder_id:
            result = self.count_folder()
        return name
