from .version import __version__, __versiondate__
from . import config
from .congruence_engine import *
from .cache import *
from .manager import *
from .cli import *
