from .report import ExperimentReport
from .postures import (
    KAPANDJI_NAMES,
    PostureLibrary,
    ROTATION_SYNERGIES,
    TAXONOMY_GRASPS,
    author_kapandji_posture,
    build_default_library,
    taxonomy_joints,
)
from .characterization import (
    run_all_bellow_characterizations,
    run_bellow_characterization,
    run_finger_characterization,
)
from .kapandji import run_kapandji
from .pullout import NoGraspError, run_pullout
from .library import replay_pose_trace, validate_library
