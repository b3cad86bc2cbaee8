"""Numerical laboratory for the iterated integrals of log zeta and their universality."""

__version__ = "0.1.0"

from .analytic import (ContinuationPath, EvalPoint, eta_continuation, eta_m, eta_m_derivatives,
                       eta_series, log_zeta, log_zeta_tracked)
from .batch import eta_batch
from .errors import (BranchJump, CatalogTooShort, CutViolation, DomainError, EmptySample, EtaLabError,
                     GridMismatch, InvalidStep, MonotonicityError, NearPole, ParseError, PoleAtOne,
                     ToleranceNotMet, ZeroFrequency)
from .intervals import ShiftIntervalSet
from .polylog import polylog
from .prime_sums import (ScanRequest, batched_scan, gs_error_bound, mellin_inversion_check, mellin_phi,
                         phi, smoothed_sum, truncated_sum)
from .random_model import (OmegaSample, eta_m_omega, fit_phases, model_moments, sample_omega)
from .sieve import LambdaTable, lambda_table
from .zeros import (CompactRectSpec, ZeroCatalog, derive_constants, ell_set, exclusion_set, ingest_zeros,
                    load_fixture, script_X_set, valid_shifts)
from .zeta import critical_zeros, hardy_z, zeta
from .lab import (CoverageReport, MetricSpec, SearchResult, denseness_probe, distribution_compare,
                  equidistribution_check, metric_d, shift_search, sup_on_K)
