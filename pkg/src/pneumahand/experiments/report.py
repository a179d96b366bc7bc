"""Tabular result container shared by all characterization/evaluation runs."""

import json
from dataclasses import dataclass, field


@dataclass
class ExperimentReport:
    """One experiment run: parameter grid, per-cell statistics, verdicts.

    Every report embeds the RNG seed and the config digest; rerunning with
    both fixed reproduces every number bit-exactly.
    """

    experiment: str
    seed: int
    config_digest: str
    columns: tuple                      # ordered cell keys
    cells: list = field(default_factory=list)   # dicts keyed by `columns`
    verdicts: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def add_cell(self, **kv):
        self.cells.append(kv)

    def verdict(self, name, passed, detail=""):
        self.verdicts[name] = {"passed": bool(passed), "detail": detail}

    @property
    def passed(self):
        return all(v["passed"] for v in self.verdicts.values())

    def to_csv(self, path):
        lines = [
            f"# experiment: {self.experiment}",
            f"# seed: {self.seed}",
            f"# config: {self.config_digest}",
            ",".join(self.columns),
        ]
        for cell in self.cells:
            lines.append(",".join(_fmt(cell.get(c)) for c in self.columns))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump({
                "experiment": self.experiment,
                "seed": self.seed,
                "config": self.config_digest,
                "verdicts": self.verdicts,
                "notes": self.notes,
                "cells": self.cells,
            }, fh, indent=2, default=_jsonable)
            fh.write("\n")

    def summary_lines(self):
        yield f"experiment: {self.experiment} (seed={self.seed}, config={self.config_digest})"
        for name, v in self.verdicts.items():
            status = "PASS" if v["passed"] else "FAIL"
            detail = f" ({v['detail']})" if v["detail"] else ""
            yield f"  [{status}] {name}{detail}"


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _jsonable(obj):
    try:
        return obj.item()
    except AttributeError:
        return str(obj)
