from .version import __version__, __versiondate__
from .curve_arith import *
from .frobenius_data import *
