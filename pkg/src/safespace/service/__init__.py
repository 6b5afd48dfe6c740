from safespace.service.app import AppState, create_app, create_state
from safespace.service.config import AppConfig, load_config
from safespace.service.loops import BackgroundLoops, HealthState

__all__ = [
    "AppConfig",
    "AppState",
    "BackgroundLoops",
    "HealthState",
    "create_app",
    "create_state",
    "load_config",
]
