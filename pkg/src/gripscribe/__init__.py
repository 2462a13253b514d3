"""gripscribe: digital twin of a passive two-bar handwriting-assistance
mechanism — damped linkage dynamics under tremorous input, workspace and
gripper geometry, damper tuning, and a live drawing session service."""

from ._kernel import BACKEND as KERNEL_BACKEND, available_backends
from .config import ConfigError, ProjectConfig, load_config, parse_config
from .dynamics import (DamperPlacement, DynamicParams, HandImpedance,
                       NonFinite, SimTrace, SingularMass, bias_and_damping,
                       hand_force, mass_matrix, simulate, step)
from .handlemount import MountConfig, Unreachable, mount_fk, mount_ik
from .kinematics import (JointState, MechanismConfig, OutOfReach, Pose2,
                         Variant, fk, ik, jacobian, wrap_angle)
from .metrics import (TransmissibilityPoint, demodulate, frequency_sweep,
                      path_rmse, transmissibility)
from .optimize import (DesignVars, GridResult, NelderMeadResult,
                       ObjectiveSpec, evaluate_design, grid_search,
                       nelder_mead, nelder_mead_minimize)
from .penholder import (DiameterOutOfRange, GripperGeometry, LinkageLocked,
                        SpringSpec, aperture, check_spring_open, solve_screw)
from .session import Session, SessionServer, create_server, replay, serve, session_step
from .signals import IntentPath, TremorSpec, compose_target, intent_path, tremor_signal
from .workspace import (CoverageReport, NoFeasiblePlacement, Orientation,
                        Sheet, coverage, manipulability, place_base,
                        radial_band, reachable)

__version__ = "0.1.0"
