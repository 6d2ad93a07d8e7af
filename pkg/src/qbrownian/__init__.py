"""Decoherence observables for a free quantum Brownian particle.

Closed forms and quadratures for the mean-square displacement, commutator,
wave-packet width, interference attenuation, decoherence times, and full
cat-state probability profiles, for Ohmic and exponential-memory baths at
zero and finite temperature.
"""

from .bath import (
    BathModel,
    RatePair,
    UnderdampedBathError,
    mu_tilde,
    ohmic,
    rates,
    response_im,
    single_relaxation_time,
)
from .decoherence import (
    BracketScanError,
    CatState,
    DecoherenceReport,
    attenuation_exact,
    attenuation_intermediate,
    attenuation_short,
    decoherence_time,
    fringe_visibility,
    probability_profile,
    tau0,
)
from .dynamics import (
    QuadratureFailure,
    TrajectoryPoint,
    commutator_magnitude,
    evaluate_trajectory,
    mean_square_velocity,
    mean_square_velocity_approx,
    msd_finite_T,
    msd_intermediate,
    msd_short_time,
    msd_zero_T,
    packet_variance,
)
from .quadrature import (
    QuadratureConfig,
    QuadratureResult,
    integrate_fluctuation,
    integrate_generic,
)
from .specfun import (
    EULER_GAMMA,
    VEval,
    coth_kernel,
    e1_scaled,
    ei_scaled_pos,
    v_asymptotic,
    v_function,
    v_series,
    v_small,
)
from .units import (
    BOLTZMANN,
    HBAR,
    NarrowSeparationWarning,
    PhysicalParams,
    ReducedParams,
    params_from_dict,
    params_from_json,
    reduce,
    restore,
    thermal_ratio,
)

__version__ = "0.1.0"
