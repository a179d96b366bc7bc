"""Run every characterization and evaluation protocol, print the verdicts."""

from pneumahand.config import build_hand_model, config_digest, load_config
from pneumahand.experiments import (build_default_library,
                                    run_all_bellow_characterizations,
                                    run_finger_characterization, run_kapandji,
                                    run_pullout, validate_library)

cfg = load_config()
model = build_hand_model(cfg)
digest = config_digest(cfg)
seed = cfg["pneumatics"]["sensor"]["seed"]
library = build_default_library(model)

reports = [run_finger_characterization(model, seed=seed, config_digest=digest)]
reports += list(run_all_bellow_characterizations(model, seed=seed,
                                                 config_digest=digest).values())
reports.append(run_kapandji(model, library, seed=seed, config_digest=digest))
reports.append(run_kapandji(model, library, zero_palm=True, seed=seed,
                            config_digest=digest))
reports.append(run_pullout(model, library["power_sphere"], seed=seed,
                           config_digest=digest,
                           anchors=cfg["experiments"]["pullout_anchors_n"],
                           mu=cfg["experiments"]["friction_mu"]))
reports.append(validate_library(model, library))

for report in reports:
    for line in report.summary_lines():
        print(line)
    print()

kap = reports[4]
print(f"kapandji score: {kap.notes['score']}/10 "
      f"(palm disabled: {reports[5].notes['score']}/10)")
pull = reports[6]
means = {c['direction']: c['force_mean_n'] for c in pull.cells}
print("pull-out means [N]: " + ", ".join(f"{d}={v:.1f}" for d, v in means.items()))
