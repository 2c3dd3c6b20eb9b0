"""dephasim: exact dephasing of two coupled two-state systems in a common bath.

Composite four-level solution, reduced single-TSS dynamics with effective
time-local rates, Markovianity witnesses (rate sign / trace-distance
back-flow), a transverse-coupling weak-limit case study, and a config-driven
scenario runner with figure presets.
"""

from .casestudy import (CaseStudyParams, CaseStudyResult, LindbladGenerator,
                        analytic_reduced, build_generator, case_study_distance,
                        dark_state)
from .drive import DriveProfile, PiecewiseConstant
from .dynamics import (ReducedParameters, abel_resummed_gamma_aux,
                       aux_spectral_weights, beta, composite_trajectory,
                       effective_rates, effective_rates_trajectory,
                       evolve_composite, gamma_aux_product,
                       integrate_reduced_me, is_product_or_uncoupled,
                       kraus_elements, reduced_qubit, reduced_trajectory,
                       spin_bath_temperature)
from .errors import (ConfigError, KrausInvalidError, KrausUndefinedError,
                     NumericalError, PositivityError, QuadratureError,
                     UnsupportedRegimeError)
from .markov import (MarkovVerdict, antipodal_pair_family, blp_witness,
                     grid_pair_search, reduced_trace_distance, rhp_witness,
                     trace_distance)
from .scenario import (PRESETS, RunReport, ScenarioConfig, preset_config,
                       run_preset, run_scenario, sweep, sweep_to_csv)
from .spectral import (DEFAULT_QUADRATURE, Discrete, Lorentzian, Ohmic,
                       PowerLaw, QuadratureConfig, coth_half, dephasing_exponent,
                       dephasing_rate, discretize, evaluate, exponent_trajectory,
                       omega_max, rate_trajectory, renormalization_shift,
                       shift_trajectory)
from .states import (BASIS_LABELS, BELL_STATES, SZ1, SZ2, SZ_TOTAL, bell_vector,
                     density_from_vector, partial_trace_aux,
                     partial_trace_aux_traj, product_vector, validate_density)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
