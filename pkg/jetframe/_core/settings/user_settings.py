from typing import Any, Dict

from .default_settings import DEFAULT_SETTINGS

RUNTIME_SETTINGS: Dict[str, Any] = {}


def set_option(key: str, value: Any) -> None:
    """Set a jetframe configuration option.

    Updates a runtime setting that affects jetframe behavior for the
    current Python session (sampling seeds, trial counts, node budgets).

    Args:
        key (str): Name of the option to set.
        value (Any): New value assigned to the option.

    Raises:
        ValueError: If ``key`` is not a known option.

    Example:

        .. code-block:: python

            import jetframe

            jetframe.set_option("verbose", False)
            jetframe.set_option("character_trials", 64)
    """
    if key not in DEFAULT_SETTINGS:
        known = ", ".join(sorted(DEFAULT_SETTINGS))
        raise ValueError(f"Unknown option '{key}'. Available options: {known}")
    RUNTIME_SETTINGS[key] = value


def reset_options() -> None:
    """Drop every runtime override."""
    RUNTIME_SETTINGS.clear()
