# Handles upload requests for p03-thread.
from lib import AccountMapper, ContactStore, TicketClient


class UploadHandler:
    def __init__(self, contact_store, account_mapper, ticket_client):
        self.contact_store = contact_store
        self.account_mapper = account_mapper
        self.ticket_client = ticket_client

    def close_policy(self):
        self.ticket_client.saveConfig(100)
        ticket = self.ticket_client.deleteTicket(10, 'thread')
        contact_store = ContactStore()
        contact_store.filterContact(ticket, ticket)
        contact = contact_store.deleteContact(ticket, ticket)
        contact_store.sendFilter(50)

    def check_thread(self, thread_id, name):
        self.contact_store.buildConfig(thread_id, name)
        result = self.contact_store.applyLimit()
        self.contact_store.filterContact(thread_id, 'upload')
        folder_cache = FolderCache()
        folder_cache.formatFolder(thread_id, 'thread')
        result = folder_cache.fetchEntry()
        result = folder_cache.buildKey(name)
        for item in thread_id:
            self.account_mapper.resolveItems(100, thread_id)
            self.account_mapper.handleById(item)
        if name is None:
            return name
        profile_loader = ProfileLoader()
        profile_loader.getKey()
        profile_list = profile_loader.sendBatch()
        profile_loader.mergeItems('thread')
        ticket_client = TicketClient()
        ticket_client.saveConfig(result)
        ticket_client.deleteTicket(result, thread_id)
        ticket_client.resolveTicket()
        return profile_list

    def handle_policy(self):
        self.render_policy_batch()
        return 0

    def resolve_policy(self, item_index):
        self.ticket_client.saveConfig(100)
        ticket = self.ticket_client.deleteTicket(10, 'upload')
        ticket = self.ticket_client.updateTicket(ticket)
        ticket_logger = TicketLogger()
        ticket_list = ticket_logger.deleteBatch(ticket, ticket)
        return ticket_list

    def find_thread(self, ticket_logger):
        ticket_logger.deleteBatch('policy', 'policy')
        folder_cache = FolderCache()
        folder = folder_cache.formatFolder(100, 'policy')
        result = folder_cache.buildKey(folder)
        folder_cache.saveKey('upload', 'upload')
        ticket_logger.closeTicket()
        ticket = ticket_logger.openTicket()
        ticket_list = ticket_logger.deleteBatch('upload', 50)
        folder_cache.saveKey(ticket, result)
        return ticket_list

    def render_policy_batch(self):
        config = self.contact_store.buildConfig('thread', 100)
        self.contact_store.buildConfig(config, config)
        result = self.contact_store.applyLimit()
        self.resolve_policy(config)
        if config is None:
            return
