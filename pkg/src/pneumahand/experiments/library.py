"""Library validation: every entry replays cleanly and deterministically,
and the 33 taxonomy postures are pairwise distinct in joint space."""

import numpy as np

from ..control import replay_setpoints
from ..hand import hand_equilibrium
from .postures import TAXONOMY_GRASPS
from .report import ExperimentReport

DISTINCT_EPS = 1e-3   # rad, joint-space L2


def replay_pose_trace(model, traj, time_scale=1.0):
    """Quasi-static replay: equilibrium at each sample's held setpoints.

    The mass controller tracks setpoints far faster than synergies move, so
    the pose trace is the equilibrium at the zero-order-held masses.
    """
    joints = []
    for t in traj.times * time_scale:
        masses = replay_setpoints(traj, t, time_scale)
        eq = hand_equilibrium(model, masses, compute_pose=False)
        joints.append(eq.joints)
    return np.asarray(joints)


def validate_library(model, library, runs=3):
    """Replay every entry `runs` times; check errors, determinism, distinctness."""
    report = ExperimentReport(
        experiment="library_validation",
        seed=0,
        config_digest="",
        columns=("entry", "replayed", "deterministic", "error"),
    )
    finals = {}
    failures = []
    for name in library.names():
        traj = library[name]
        traces = []
        error = ""
        try:
            for _ in range(runs):
                traces.append(replay_pose_trace(model, traj))
        except (ValueError, KeyError) as exc:
            error = str(exc)
        replayed = not error
        deterministic = replayed and all(
            np.array_equal(traces[0], tr) for tr in traces[1:]
        )
        if replayed and deterministic:
            finals[name] = traces[0][-1]
        else:
            failures.append(name)
        report.add_cell(entry=name, replayed=replayed,
                        deterministic=deterministic, error=error)

    taxonomy = [n for n in TAXONOMY_GRASPS if n in finals]
    n = len(taxonomy)
    distances = np.zeros((n, n))
    min_distance = np.inf
    clashes = []
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.linalg.norm(finals[taxonomy[i]] - finals[taxonomy[j]]))
            distances[i, j] = distances[j, i] = d
            min_distance = min(min_distance, d)
            if d <= DISTINCT_EPS:
                clashes.append((taxonomy[i], taxonomy[j], d))

    report.notes["pairwise_distance_matrix"] = distances.tolist()
    report.notes["taxonomy_order"] = taxonomy
    report.notes["min_pairwise_distance_rad"] = float(min_distance)
    report.notes["entries_total"] = len(library.names())
    report.notes["entries_passed"] = len(finals)
    report.verdict("all_entries_replay",
                   len(finals) == len(library.names()),
                   f"{len(finals)}/{len(library.names())} entries"
                   + (f", failures: {failures}" if failures else ""))
    report.verdict("taxonomy_distinct", not clashes and n == len(TAXONOMY_GRASPS),
                   f"min pairwise distance {min_distance:.4f} rad")
    return report
