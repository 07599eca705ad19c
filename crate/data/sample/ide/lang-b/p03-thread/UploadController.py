# Handles upload requests for p03-thread.
from lib import ContactStore, MemberStore


class UploadController:
    def __init__(self, member_store, contact_store):
        self.member_store = member_store
        self.contact_store = contact_store

    def resolve_upload(self):
        result = self.member_store.updateById('upload', 'thread')
        for item in result:
            self.process_policy(item, result)
        account_mapper = AccountMapper()
        account_mapper.renderAll()
        for item in result:
            self.update_upload_batch()

    def resolve_upload_batch(self):
        self.process_policy(50, 'policy')
        self.process_policy('policy', 10)
        self.resolve_upload()
        return 0

    def update_upload_batch(self):
        self.resolve_upload()
        result = self.member_store.updateById(10, 'upload')
        result = self.member_store.verifyById(50, 'upload')
        contact = self.contact_store.removeContact(result, result)
        ticket_logger = TicketLogger()
        result = ticket_logger.resolveKey()

    def process_policy(self, policy_id, name):
        self.update_upload_batch()
        self.member_store.clearKey()
        return name
