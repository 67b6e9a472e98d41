import pytest

from jetframe._core.settings.user_settings import reset_options, set_option


@pytest.fixture(autouse=True)
def quiet_settings():
    """Each test starts from the default settings with progress logging off."""
    reset_options()
    set_option("verbose", False)
    yield
    reset_options()
