"""fadekit: performance analytics for multi-hop decode-and-forward links
whose hops fade per generalized nonlinear (and severe-limit) laws, with an
independent Monte-Carlo channel simulator for cross-validation."""

__version__ = "0.1.0"

from .channel import AlphaKappaMu, AlphaKappaMuExtreme, PoincareSeries, poincare_series
from .errors import (
    ConfigError,
    ConvergenceError,
    DivergentInverseMoment,
    DomainError,
    FadekitError,
    NonFiniteError,
    PoleSeparationError,
)
from .mc import Estimate, McConfig, estimate_metric, sample_akm, sample_extreme, simulate_chain
from .metrics import (
    CapacityResult,
    Modulation,
    amount_of_fading,
    ber_asymptotic,
    ber_coherent,
    ber_noncoherent,
    capacity_cifr,
    capacity_opra,
    capacity_ora,
    capacity_tifr,
    cifr_inverse_moment,
    modulation,
    opra_cutoff,
    outage_probability,
    tifr_inversion_integral,
)
from .numerics import QuadSpec, fixed_point, integrate
from .specfun import (
    MeijerGSpec,
    bessel_i,
    erfc,
    kummer_m,
    kummer_m_regularized,
    marcum_q,
    meijer_g,
    nuttall_q,
)
from .config import Scenario, load_config
from .sweep import SweepResult, run_sweep
from .system import HopChain

__all__ = [
    "__version__",
    "AlphaKappaMu",
    "AlphaKappaMuExtreme",
    "PoincareSeries",
    "poincare_series",
    "HopChain",
    "Scenario",
    "load_config",
    "SweepResult",
    "run_sweep",
    "Modulation",
    "modulation",
    "CapacityResult",
    "amount_of_fading",
    "outage_probability",
    "ber_coherent",
    "ber_noncoherent",
    "ber_asymptotic",
    "capacity_ora",
    "opra_cutoff",
    "capacity_opra",
    "capacity_cifr",
    "capacity_tifr",
    "cifr_inverse_moment",
    "tifr_inversion_integral",
    "McConfig",
    "Estimate",
    "sample_akm",
    "sample_extreme",
    "simulate_chain",
    "estimate_metric",
    "QuadSpec",
    "integrate",
    "fixed_point",
    "MeijerGSpec",
    "bessel_i",
    "erfc",
    "kummer_m",
    "kummer_m_regularized",
    "marcum_q",
    "meijer_g",
    "nuttall_q",
    "FadekitError",
    "DomainError",
    "ConvergenceError",
    "NonFiniteError",
    "PoleSeparationError",
    "DivergentInverseMoment",
    "ConfigError",
]
