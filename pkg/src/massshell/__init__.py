"""Relativistic Wiener and Ornstein-Uhlenbeck diffusions on the mass shell.

Simulation uses a positivity-preserving backward Euler-Maruyama scheme for
the singular radial SDE, a projected-increment Wiener process on the unit
sphere run on the stochastic clock of the skew product, and direct
cartesian Euler schemes (d = 2, 3) as an independent cross-check.  The
closed-form invariant laws of the damped process are implemented together
with KS-based statistical validation.
"""

from ._kernels import NUMBA_ENABLED
from .dynamics import BoundaryReport, RadialDriftSpec, boundary_report, drift, scale_density
from .errors import (CoordinateSingularityError, DomainError, InfiniteMomentError,
                     IntegratorFailureError, MassShellError, NonNormalizableError,
                     OffShellError, QuadratureError, UnsupportedDimensionError)
from .integrators import (PathEnsemble, RadialPathState, SkewState, StepConfig,
                          bem_step, path_rng, run_ensemble, simulate_cartesian_path,
                          simulate_momentum_path, skew_step, sphere_step)
from .manifold import (CartesianMomentum, HyperbolicPoint, ModelParams,
                       UnitSpherePoint, apply_generator, cart_to_hyp,
                       hyp_to_cart, minkowski_inner, sphere_embed, velocity_of)
from .measures import (DensitySpec, adjoint_residual, cdf, cdf_values,
                       density_energy, density_momentum_component, density_radial,
                       density_speed, density_velocity_component,
                       normalizer_component, normalizer_component_quadrature,
                       normalizer_radial, normalizer_radial_quadrature)
from .stats import (GofReport, Histogram, histogram, hitting_fraction,
                    ks_against, ks_distance, ks_two_sample, moment_check,
                    theoretical_moment)

__version__ = "0.1.0"
