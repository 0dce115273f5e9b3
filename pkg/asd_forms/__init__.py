from .version import __version__, __versiondate__
from .padic_core import *
from .qseries import *
from .classical_forms import *
