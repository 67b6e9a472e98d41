from typing import Any, Dict

from .default_settings import DEFAULT_SETTINGS
from .user_settings import RUNTIME_SETTINGS


def load_settings() -> Dict[str, Any]:
    return {**DEFAULT_SETTINGS, **RUNTIME_SETTINGS}


def setting(key: str, override: Any = None) -> Any:
    """Return ``override`` when given, else the loaded value of ``key``."""
    if override is not None:
        return override
    return load_settings()[key]
