"""coboundary-lab src package initialization.

Exact constructions and diagnostics for the coboundary equation f = g - g∘T
on [0,1). Import modules directly, for example:

    from src.measure_core import StepFunction, PiecewiseTranslation
    from src.solver import construct_bounded_solution, verify

"""

from . import errors              # noqa: F401
from . import exact               # noqa: F401
from . import settings            # noqa: F401
from . import measure_core        # noqa: F401
from . import towers              # noqa: F401
from . import serialization       # noqa: F401
from . import norms               # noqa: F401
from . import solver              # noqa: F401
from . import growth              # noqa: F401
from . import diagnostics         # noqa: F401
from . import generic_class       # noqa: F401
from . import counterexamples     # noqa: F401
from . import reports             # noqa: F401
from . import samples             # noqa: F401
from . import run_config          # noqa: F401
from . import verbosity_options   # noqa: F401
