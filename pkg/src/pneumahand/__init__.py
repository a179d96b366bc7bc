"""pneumahand: quasi-static simulator and control workbench for a 16-channel
pneumatic soft hand."""

from .constants import R_AIR, T_AMBIENT, P_ATMOSPHERE, P_SUPPLY_GAUGE
from .pneumatics import (
    ChamberState,
    PneumaticPlant,
    PressureSensorModel,
    Reservoir,
    ValveBank,
    chamber_pressure,
    read_pressure,
    step_plant,
    valve_mass_flow,
)
from .actuators import (
    BellowSpec,
    CalibrationTable,
    PneuFlexCompartmentSpec,
    TwoCompartmentFingerSpec,
    bellow_torque,
    compartment_volume,
    finger_free_pose,
    fingertip_force,
    fit_moment_arm,
)
from .hand import (
    Channel,
    ExternalLoad,
    HandModel,
    HandPose,
    N_CHANNELS,
    forward_kinematics,
    hand_equilibrium,
    joint_equilibrium,
    kapandji_targets,
    mass_for_joint,
    masses_for_joints,
)
from .control import (
    ControlLoop,
    ControllerConfig,
    MassEstimatorState,
    MassTrajectory,
    Recorder,
    control_step,
    estimate_step,
    replay_setpoints,
)
from .config import (
    DEFAULT_CONFIG,
    build_hand_model,
    build_plant,
    build_sensor,
    config_digest,
    load_config,
)

__version__ = "0.1.0"
