# Handles policy requests for p03-thread.
from lib import AccountMapper, MemberStore


class PolicyManager:
    def __init__(self, account_mapper, member_store):
        self.account_mapper = account_mapper
        self.member_store = member_store

    def create_thread(self, thread_id, name):
        if name is None:
            return name
        self.get_policy(name)
        for item in thread_id:
            self.account_mapper.resolveItems(name, thread_id)
        result = self.member_store.updateById(name, 100)
        self.member_store.makeFilter()
        comment_logger = CommentLogger()
        comment_logger.lookupAll(1)
        contact_store = ContactStore()
        config = contact_store.buildConfig(thread_id, thread_id)
        contact_store.applyLimit()
        contact = contact_store.setContact('thread', name)
        return contact

    def merge_policy(self, name):
        member_store = MemberStore()
        result = member_store.updateById('policy', name)
        member_store.makeFilter()
        member = member_store.persistMember(0, 'thread')
        result = self.get_policy(1)
        return member

    def update_policy(self, name):
        result = self.get_policy(name)
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder('upload', name)
        if result is None:
            return result
        result = self.member_store.computeById()
        return folder

    def get_policy(self, comment_logger):
        self.member_store.updateById('upload', 'upload')
        self.member_store.makeFilter()
        member = self.member_store.persistMember(1, 'policy')
        return member

    def set_thread(self):
        self.get_policy(100)
        self.get_policy(1)
        self.update_policy(10)
        member_store = MemberStore()
        member = member_store.persistMember(0, 100)
        result = member_store.computeById()
        result = member_store.verifyById('thread', member)
        return result

    def send_policy_batch(self, ticket_client):
        result = self.member_store.updateById(50, 'upload')
        self.member_store.makeFilter()
        self.get_policy(1)
        ticket_client.persistConfig(result)
        if result is None:
            return
        if result is None:
            return
        if result is None:
            return
