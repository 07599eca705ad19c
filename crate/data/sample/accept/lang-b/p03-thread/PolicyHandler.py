# Handles policy requests for p03-thread.
from lib import ContactStore


class PolicyHandler:
    def __init__(self, contact_store):
        self.contact_store = contact_store

    def find_thread(self, name):
        result = self.parse_thread_internal(name)
        self.contact_store.applyLimit()
        self.contact_store.setContact(name, result)
        self.contact_store.buildConfig(result, name)
        result = self.contact_store.applyLimit()
        self.contact_store.setContact(result, 0)
        config = self.contact_store.buildConfig(name, result)
        self.contact_store.applyLimit()
        return config

    def process_thread(self):
        contact_store = ContactStore()
        config = contact_store.buildConfig('upload', 0)
        result = contact_store.applyLimit()
        contact = contact_store.setContact(0, config)
        self.sort_upload(contact)

    def sort_upload(self, account_mapper):
        self.parse_thread()
        self.find_thread('thread')
        config = self.contact_store.buildConfig(1, 1)
        result = self.contact_store.applyLimit()
        comment_logger = CommentLogger()
        comment_logger.findAll(result)
        comment_logger.setComment()
        comment_logger.checkComment()

    def parse_thread(self):
        self.process_thread()
        self.contact_store.buildConfig('policy', 0)
        result = self.contact_store.applyLimit()
        self.contact_store.setContact(result, result)
        if result is None:
            return
        for item in result:
            result = self.contact_store.close(item)
        profile_loader = ProfileLoader()
        profile_loader.applyById()

    def parse_thread_internal(self, name):
        if name is None:
            return name
        for item in name:
            config = self.contact_store.buildConfig(10, name)
            self.contact_store.applyLimit()
            self.contact_store.setContact(name, 1)
        return name
