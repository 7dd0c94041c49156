"""Exact q-series and overpartition tools for checking Gordon-type identities."""

from .combinatorics import (
    ClassSpec,
    ClassTag,
    InvalidParameters,
    Overpartition,
    ParameterSet,
    bijection_forward,
    bijection_inverse,
    count_class,
    enumerate_class,
    gen_fun,
)
from .hyperseries import (
    u_product_closed_form,
    u_series_claimed,
    ubar_product_closed_form,
    ubar_series_claimed,
)
from .series import EXACT, LaurentSeries, Monomial, Substitution
from .verify import CheckSpec, VerificationReport, run_all, run_check

__version__ = "0.1.0"

__all__ = [
    "ClassSpec", "ClassTag", "InvalidParameters", "Overpartition", "ParameterSet",
    "bijection_forward", "bijection_inverse", "count_class", "enumerate_class", "gen_fun",
    "u_product_closed_form", "u_series_claimed", "ubar_product_closed_form", "ubar_series_claimed",
    "EXACT", "LaurentSeries", "Monomial", "Substitution",
    "CheckSpec", "VerificationReport", "run_all", "run_check",
]
