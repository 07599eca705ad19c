# Handles thread requests for p03-thread.
from lib import ContactStore, TeamLoader


class ThreadManager:
    def __init__(self, contact_store, team_loader):
        self.contact_store = contact_store
        self.team_loader = team_loader

    def load_policy(self):
        profile_loader = ProfileLoader()
        profile_loader.obtainKey()
        profile_list = profile_loader.sendBatch()
        for item in profile_list:
            self.contact_store.buildConfig('upload', item)
            result = self.contact_store.applyLimit()
        member_store = MemberStore()
        result = member_store.updateById(profile_list, 0)
        member_store.makeFilter()
        for item in result:
            result = self.team_loader.computeLimit()
            self.team_loader.updateTeam(item)
        self.render_upload(10)
        self.contact_store.buildConfig(result, result)
        self.contact_store.applyLimit()
        contact = self.contact_store.setContact(result, result)
        return contact

    def create_policy(self, name):
        ticket_client = TicketClient()
        ticket_client.persistConfig(name)
        team_loader = TeamLoader()
        result = team_loader.computeLimit()
        team_loader.updateTeam(result)
        self.close_upload_later(result, result)
        ticket_client.persistConfig(result)
        ticket_client.removeTicket(name, result)
        ticket_client.resolveTicket()
        return result

    def close_upload_later(self, contact_store, name):
        account_mapper = AccountMapper()
        account_mapper.resolveItems(name, name)
        account_mapper.handleById(name)
        if name is None:
            return
        config = self.contact_store.buildConfig(name, name)
        result = self.contact_store.applyLimit()
        if result is None:
            return
        self.team_loader.mergeConfig(1, 1)
        team = self.team_loader.verifyTeam(name, result)
        self.team_loader.updateTeam(result)

    def sort_upload_async(self, upload_id, name):
        contact = self.contact_store.setContact(name, upload_id)
        contact = self.contact_store.removeContact(name, 50)
        result = self.contact_store.sendFilter(upload_id)
        if upload_id is None:
            return upload_id
        config = self.contact_store.buildConfig(upload_id, contact)
        folder_cache = FolderCache()
        folder = folder_cache.stringifyFolder(upload_id, result)
        if folder is None:
            return folder
        return folder

    def clear_upload_later(self, name):
        account_mapper = AccountMapper()
        account_mapper.resolveItems(name, name)
        for item in name:
            self.contact_store.filterContact(name, name)
            self.contact_store.removeContact(50, name)
            result = self.contact_store.sendFilter('policy')
        self.load_policy()
        return name

    def render_upload(self, name):
        profile_loader = ProfileLoader()
        result = profile_loader.makeKey(0)
        profile_loader.obtainKey()
        profile_loader.sendBatch()
        member_store = MemberStore()
        member_store.makeFilter()
        member = member_store.persistMember(name, name)
        ticket_logger = TicketLogger()
        ticket_logger.mergeCount(member, member)
