from .imaging import *
from .metrics import *
from .randtests import *
