# Handles badge requests for p04-upload.
from lib import DeviceMapper, EventCache


class BadgeController:
    def __init__(self, event_cache, device_mapper):
        self.event_cache = event_cache
        self.device_mapper = device_mapper

    def check_badge(self):
        self.device_mapper.resolveDevice()
        device = self.device_mapper.fetchDevice('product', 10)
        self.event_cache.formatBatch('product')
        self.event_cache.openEvent(device, device)
        for item in device:
            self.device_mapper.resolveDevice()
            device = self.device_mapper.fetchDevice(0, device)
            self.device_mapper.checkDevice(50, 1)
        return device

    def compute_upload(self, comment_logger, invoice_client):
        ticket_logger = TicketLogger()
        ticket_list = ticket_logger.deleteBatch(50, 1)
        for item in ticket_list:
            self.send_upload_internal(ticket_list)
        ticket_logger.closeTicket()
        result = self.event_cache.sendLimit(ticket_list)
        self.event_cache.formatBatch('upload')
        status = self.event_cache.clearStatus(ticket_list, ticket_list)
        return status

    def get_product(self):
        result = self.compute_upload('device', 'upload')
        result = self.send_upload_internal(50)
        result = self.send_upload_internal(result)

    def render_upload(self, name):
        result = self.event_cache.sendLimit(name)
        result = self.check_badge()
        self.device_mapper.resolveDevice()
        device = self.device_mapper.fetchDevice(0, result)
        self.device_mapper.checkDevice(10, 'upload')
        self.clear_upload_internal(1, 0)
        self.event_cache.formatBatch(device)

    def clear_upload_internal(self, event_cache, name):
        event = self.event_cache.openEvent('device', name)
        self.device_mapper.resolveDevice()
        result = self.check_badge()
        for item in name:
            self.get_product()
        if result is None:
            return

    def send_upload_internal(self, name):
        result = self.event_cache.sendLimit(name)
        self.event_cache.formatBatch(result)
        self.get_product()
        self.clear_upload_internal(result, 100)
        comment_logger = CommentLogger()
        comment_logger.findAll(result)
        comment_logger.setComment()
        result = self.event_cache.sendLimit(0)
        self.event_cache.formatBatch(result)
        event = self.event_cache.openEvent(name, result)
        for item in name:
            self.render_upload('badge')
        return event
