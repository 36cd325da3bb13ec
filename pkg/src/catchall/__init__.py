"""Catch-all multi-step estimation for a latent AR(1) observed with noise,
and interval bounds on the latent spectrum."""
from ._accel import BACKEND
from .errors import (CatchallError, DegenerateSeriesError, HorizonTooLargeError,
                     NonPositiveRatioError, ParameterError, SeriesTooShortError)
from .estimate import (EstimateResult, Method, SearchOptions, WeightScheme, estimate_catchall,
                       estimate_closed_form, kstep_residuals, objective, profile_objective,
                       pseudo_true)
from .model import (Arma11Params, HorizonSpec, ReducedMoments, StructuralParams,
                    asy_variance_factor, autocov_y, bias_constant, latent_variance, plim_k,
                    reduce_to_arma)
from .montecarlo import (ExperimentConfig, run_bias_experiment, run_spectral_coverage,
                         run_variance_experiment)
from .simulate import SeriesPath, SimConfig, observe, simulate_arma, simulate_latent
from .spectral import (SpectralBounds, SpectralCurve, find_features, identification_bounds,
                       noise_variance_bound, periodogram, smooth, spectrum_ar1, spectrum_y)

__version__ = "0.1.0"
