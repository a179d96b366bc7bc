"""Thumb-opposition scoring: replay each stored posture, measure the
thumb-tip-to-target distance on the settled pose, count touches."""

import numpy as np

from ..hand import Channel, hand_equilibrium
from .postures import KAPANDJI_NAMES
from .report import ExperimentReport


def run_kapandji(model, library, tolerance=None, zero_palm=False, seed=0,
                 config_digest=""):
    """Score 0-10 plus per-target distances.

    `zero_palm` forces the palm-hollowing channel to zero air mass during
    replay, which shows how much of the ulnar reach rides on that single
    degree of actuation.
    """
    tol = model.kapandji_tolerance if tolerance is None else tolerance
    report = ExperimentReport(
        experiment="kapandji" + ("[palm_disabled]" if zero_palm else ""),
        seed=seed,
        config_digest=config_digest,
        columns=("target", "label", "distance_mm", "touched"),
    )
    score = 0
    for i, name in enumerate(KAPANDJI_NAMES):
        if name not in library:
            report.add_cell(target=i + 1, label="missing", distance_mm=float("nan"),
                            touched=False)
            continue
        traj = library[name]
        masses = traj.masses[-1].copy()
        if zero_palm:
            masses[Channel.PALM_BELLOW] = 0.0
        eq = hand_equilibrium(model, masses)
        label, target = eq.pose.kapandji_points[i]
        distance = float(np.linalg.norm(eq.pose.tip_positions["thumb"] - target))
        touched = distance <= tol
        score += int(touched)
        report.add_cell(target=i + 1, label=label, distance_mm=distance * 1e3,
                        touched=touched)
    report.notes["score"] = score
    report.notes["tolerance_mm"] = tol * 1e3
    report.verdict("score", score == 10 if not zero_palm else score <= 4,
                   f"score {score}/10")
    return report
