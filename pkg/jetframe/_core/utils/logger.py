import logging
import time
from functools import wraps
from logging import Logger
from typing import Any, Callable, Optional, TypeVar

from jetframe._core.settings.loader import load_settings

F = TypeVar("F", bound=Callable[..., Any])


def get_logger(name: Optional[str] = None) -> Logger:
    """
    Get a configured logger instance for this library.

    This function returns a `logging.Logger` instance with a simple console
    StreamHandler attached. The logger is configured to:
        - Output messages at the INFO level.
        - Use a clean formatter: only the message text.
        - Prevent propagation to the root logger to avoid duplicate messages.

    Args:
        name (Optional[str]): The name of the logger. If None, the root logger is used.

    Returns:
        Logger: A `logging.Logger` instance ready to use.
    """
    logger = logging.getLogger(name)
    if not logger.hasHandlers():
        handler = logging.StreamHandler()
        formatter = logging.Formatter("%(message)s")
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(logging.INFO)
        logger.propagate = False

    return logging.getLogger(name)


def is_verbose() -> bool:
    return bool(load_settings()["verbose"])


def info(logger: Logger, message: str) -> None:
    """Log ``message`` at INFO when the ``verbose`` setting is on."""
    if is_verbose():
        logger.info(message)


def log_step(label: str) -> Callable[[F], F]:
    """
    Decorator logging the wall time of an analysis entry point.

    The decorated function runs unchanged; afterwards, if `verbose` is enabled
    in the settings, a single line ``<label>: <seconds>s`` is written to the
    logger of the module that defines the function.

    Args:
        label (str): Short name of the step shown in the log line.

    Returns:
        Callable: A decorator that preserves the wrapped signature.
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            start = time.perf_counter()
            result = func(*args, **kwargs)
            if is_verbose():
                elapsed = time.perf_counter() - start
                get_logger(func.__module__).info(f"{label}: {elapsed:.2f}s")
            return result

        return wrapper  # type: ignore[return-value]

    return decorator
