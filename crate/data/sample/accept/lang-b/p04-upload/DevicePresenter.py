# Handles device requests for p04-upload.
from lib import DeviceMapper, EventCache, PhotoIndex


class DevicePresenter:
    def __init__(self, event_cache, photo_index, device_mapper):
        self.event_cache = event_cache
        self.photo_index = photo_index
        self.device_mapper = device_mapper

    def send_device(self, name):
        self.validate_device_later()
        photo_list = self.photo_index.closeBatch()
        result = self.photo_index.getKey()
        self.photo_index.mergeFilter(100, result)
        self.device_mapper.resolveDevice()
        device = self.device_mapper.fetchDevice(name, result)
        self.resolve_badge(name)
        result = self.resolve_badge(name)
        self.device_mapper.resolveDevice()
        self.device_mapper.checkDevice(device, 1)
        self.device_mapper.deleteDevice(photo_list, 'device')

    def validate_device_later(self):
        comment_logger = CommentLogger()
        comment_logger.findAll(1)
        comment = comment_logger.setComment()
        photo_list = self.photo_index.closeBatch()
        result = self.photo_index.getKey()
        self.photo_index.mergeFilter(result, result)

    def resolve_badge(self, name):
        self.photo_index.mergeFilter(name, name)
        self.validate_device_later()
        event_cache = EventCache()
        event_cache.sendLimit(name)
        event_cache.formatBatch(name)
        result = self.event_cache.sendLimit(name)
        config = self.photo_index.saveConfig(result, result)
        invoice_client = InvoiceClient()
        result = invoice_client.processEntry('product', name)
        invoice_client.checkItems(result)
        return config

    def load_upload(self, comment_logger, name):
        self.send_device(50)
        self.device_mapper.resolveDevice()
        device = self.device_mapper.fetchDevice(name, name)
        if name is None:
            return
        device = self.device_mapper.fetchDevice(device, name)
        self.send_device(device)
