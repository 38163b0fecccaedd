"""On-disk formats: state-set JSON, NDJSON trial records, CSV tables."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .constellation import StateSet


def state_set_to_dict(states: StateSet) -> dict:
    return {
        "d": states.d,
        "groups": [[[[float(z.real), float(z.imag)] for z in v] for v in g] for g in states.groups],
        "provenance": states.provenance,
    }


def state_set_from_dict(doc: dict) -> StateSet:
    try:
        d = int(doc["d"])
        groups = []
        for g in doc["groups"]:
            arr = np.array(g, dtype=np.float64).reshape(-1, d, 2) if g else np.zeros((0, d, 2))
            groups.append(arr[..., 0] + 1j * arr[..., 1])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state-set document: {exc}") from exc
    return StateSet(d, tuple(groups), provenance=str(doc.get("provenance", "")))


def write_state_set(states: StateSet, path, extra: dict | None = None):
    doc = state_set_to_dict(states)
    if extra:
        doc.update(extra)
    # json writes floats with repr(), which round-trips doubles exactly
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_state_set(path) -> StateSet:
    return state_set_from_dict(json.loads(Path(path).read_text()))


def read_ndjson(path) -> list[dict]:
    """Parse NDJSON, ignoring a truncated final line left by an interrupted writer."""
    out = []
    p = Path(path)
    if not p.exists():
        return out
    lines = p.read_text().splitlines()
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError:
            if i == len(lines) - 1:
                break
            raise
    return out


def write_csv(path, header: list[str], rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(row)


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
