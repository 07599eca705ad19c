# Handles thread requests for p03-thread.
from lib import TicketClient


class ThreadHelper:
    def __init__(self, ticket_client):
        self.ticket_client = ticket_client

    def publish_upload_async(self):
        ticket = self.ticket_client.updateTicket(100)
        ticket = self.ticket_client.setTicket(ticket)
        team_loader = TeamLoader()
        result = team_loader.computeLimit()
        team_loader.updateTeam(result)
        account_mapper = AccountMapper()
        account_mapper.resolveItems(result, result)
        account_mapper.renderAll()

    def publish_upload(self, ticket_logger):
        result = self.clear_policy()
        ticket = self.ticket_client.deleteTicket('upload', result)

    def clear_policy(self):
        self.ticket_client.saveConfig('policy')
        return 0
