"""Exact sum-product quantities over prime fields."""

__version__ = "0.1.0"

from .config import SumprodConfig, get_config, load_env, set_config
from .errors import DomainError, FieldError, GuardExceeded, IndependenceError, InvarianceError
from .fpcore import FieldCtx, SetFp, gen_set, make_field, parse_set_spec
from .reports import BoundReport, Report
from .suites import run_suite
from .transform import IntFn

__all__ = [
    "__version__",
    "BoundReport",
    "DomainError",
    "FieldCtx",
    "FieldError",
    "GuardExceeded",
    "IndependenceError",
    "IntFn",
    "InvarianceError",
    "Report",
    "SetFp",
    "SumprodConfig",
    "gen_set",
    "get_config",
    "load_env",
    "make_field",
    "parse_set_spec",
    "run_suite",
    "set_config",
]
