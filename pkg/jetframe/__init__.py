from ._core.errors import AnalysisError, InputError, JetframeError
from ._core.settings.user_settings import reset_options, set_option

__all__ = ["AnalysisError", "InputError", "JetframeError", "reset_options", "set_option"]
