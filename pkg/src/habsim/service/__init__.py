from .app import create_app, default_scenario
from .live import LiveLoop

__all__ = ["create_app", "default_scenario", "LiveLoop"]
