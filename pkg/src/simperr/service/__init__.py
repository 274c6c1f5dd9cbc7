"""Annotation service: task dispensing, durable submissions, export."""

from .config import ServiceConfig, load_config
from .log import EventLog
from .store import AnnotationStore, Item, load_items, parse_items
from .app import create_app

__all__ = [
    "ServiceConfig",
    "load_config",
    "EventLog",
    "AnnotationStore",
    "Item",
    "load_items",
    "parse_items",
    "create_app",
]
