"""Congruences for partitions with k-colored odd parts, checked on truncated q-series."""

from .series import EXACT, CoefficientRing, Mod, Series, SeriesError, make_series
from .eta import EtaQuotientSpec, PochhammerProductSpec, eta_quotient, f_ell, pochhammer_product
from .partitions import a_bruteforce, a_table_recurrence, a_table_series, p_table
from .congruences import CongruenceClaim, builtin_catalog, scan, verify_catalog, verify_claim

__version__ = "0.1.0"
