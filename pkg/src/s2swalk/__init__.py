"""Online adaptive identification of step-to-step walking dynamics with
per-step foot-placement controller synthesis, evaluated on surrogate plants.
"""
from .errors import (ConfigError, DegenerateFeedforwardError, FallDetected,
                     InvalidArgumentError, RiccatiDivergenceError,
                     SingularModelError, UncontrollableModelError)
from .gains import (FeedbackGain, controllability_ok, deadbeat_gain,
                    dlqr_gain, spectral_radius)
from .harness import (ChannelConfig, EstimatorOptions, GainOptions, Metrics,
                      ScenarioConfig, StepRecord, compare, run_episode,
                      sweep, with_controller)
from .hlip import (GaitParams, HlipMatrices, hlip_s2s, integrate_hlip_step,
                   ssp_transition, stepping_control)
from .identify import (LegModels, ProjectionRegressor, horizon_update,
                       initial_output_theta, initial_state_theta,
                       output_blocks, pack_output, pack_state, predict,
                       projection_update, regressor, state_blocks)
from .io import dump_config, load_config, write_csv, write_metrics_csv
from .plants import (HoldSchedule, OutputMap, PlantConfig, PlantOutput,
                     RampSchedule, eval_schedule, make_plant)
from .scenarios import builtin_scenarios, run_suite
from .stepping import (OrbitTarget, OutputFeedforward, bias_equilibrium,
                       nominal_orbit, output_feedforward,
                       output_tracking_control, p1_fixed_point, p1_orbit,
                       p2_fixed_points, p2_orbit, saturate_step,
                       state_tracking_control)

__version__ = "0.1.0"
