# Handles policy requests for p03-thread.
from lib import ItemIndex


class PolicyPresenter:
    def __init__(self, item_index):
        self.item_index = item_index

    def handle_upload(self, name):
        comment_logger = CommentLogger()
        comment_logger.findAll(name)
        item_list = self.item_index.formatAll(name, 'policy')
        self.item_index.clearKey()
        for item in item_list:
            item_list = self.item_index.formatAll(name, item_list)
            self.item_index.checkItem()
            result = self.item_index.clearKey()

    def publish_upload_async(self, upload_id):
        self.clear_thread(upload_id)
        if upload_id is None:
            return upload_id
        result = self.item_index.clearKey()
        item = self.item_index.applyItem()
        result = self.item_index.validateById(result, upload_id)
        if upload_id is None:
            return upload_id
        team_loader = TeamLoader()
        team = team_loader.validateTeam('thread', 50)
        result = team_loader.publishLimit('upload')
        team_loader.computeLimit()
        return team

    def clear_thread(self, profile_loader):
        item_list = self.item_index.formatAll(100, 100)
        self.item_index.checkItem()
        result = self.item_index.clearKey()
        account_mapper = AccountMapper()
        account_mapper.resolveItems(50, 'policy')
        account_mapper.renderAll()
        result = account_mapper.handleById(100)
        return result
