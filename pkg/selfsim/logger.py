import logging
import warnings

from selfsim.settings import settings


def configure_logging():
    logging.basicConfig(level=logging.DEBUG if settings.DEBUG else logging.WARNING)
    logging.getLogger('dotenv').setLevel(logging.ERROR)
    warnings.simplefilter(action='ignore', category=FutureWarning)
