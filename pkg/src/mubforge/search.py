"""Random-restart campaigns: seeded starts, parallel trials, success statistics."""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .constellation import TWO_PI, ConstellationSpec, ParameterPoint, classify, enumerate_subspecs, leq, parse_spec
from .formats import read_ndjson
from .optimizer import F_CRITICAL, LmConfig, MinimizeResult, minimize

log = logging.getLogger(__name__)

PRNG_NAME = "philox4x64-v1"
HIST_LO = -20
HIST_HI = 2


def default_workers() -> int:
    return max(1, int(os.environ.get("MUBFORGE_WORKERS", "1")))


def trial_key(master_seed: int, trial: int) -> int:
    """128-bit Philox key: low word the master seed, high word the trial index."""
    return (int(master_seed) & (2**64 - 1)) | (int(trial) << 64)


def seed_string(master_seed: int, trial: int) -> str:
    return f"{PRNG_NAME}:{trial_key(master_seed, trial):032x}"


def random_point(spec: ConstellationSpec, seed: int) -> ParameterPoint:
    """Angles i.i.d. uniform on [0, 2 pi) from a Philox stream keyed by ``seed``."""
    classify(spec)
    gen = np.random.Generator(np.random.Philox(key=int(seed)))
    return ParameterPoint(spec, gen.random(spec.n_params) * TWO_PI)


@dataclass(frozen=True)
class CampaignConfig:
    spec: ConstellationSpec
    trials: int = 100
    master_seed: int = 0
    lm: LmConfig = field(default_factory=LmConfig)
    workers: int = 1
    objective: str = "abs"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.objective not in ("abs", "squared"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in 64 bits")
        classify(self.spec)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: str
    final_f: float
    iters: int
    term: str
    ms: float

    @property
    def success(self) -> bool:
        return self.final_f < F_CRITICAL

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_dict(cls, doc: dict) -> "TrialRecord":
        return cls(int(doc["trial"]), str(doc["seed"]), float(doc["final_f"]), int(doc["iters"]),
                   str(doc["term"]), float(doc["ms"]))


def run_trial(spec: ConstellationSpec, master_seed: int, trial: int, lm: LmConfig | None = None,
              squared: bool = False) -> tuple[TrialRecord, MinimizeResult]:
    t0 = time.perf_counter()
    start = random_point(spec, trial_key(master_seed, trial))
    res = minimize(start, lm, squared=squared)
    ms = (time.perf_counter() - t0) * 1e3
    rec = TrialRecord(trial, seed_string(master_seed, trial), res.final_F, res.iterations,
                      res.termination, round(ms, 3))
    return rec, res


def _trial_task(args) -> TrialRecord:
    spec, master_seed, trial, lm, squared = args
    return run_trial(spec, master_seed, trial, lm, squared)[0]


@dataclass(frozen=True)
class Histogram:
    """Decade bins 10^k..10^(k+1) for k in [HIST_LO, HIST_HI), plus under/overflow."""

    counts: tuple[int, ...]
    underflow: int
    overflow: int

    @staticmethod
    def edges() -> list[float]:
        return [10.0**k for k in range(HIST_LO, HIST_HI + 1)]

    @classmethod
    def of(cls, values) -> "Histogram":
        counts = [0] * (HIST_HI - HIST_LO)
        under = over = 0
        for v in values:
            if not v >= 10.0**HIST_LO:
                under += 1
            elif v >= 10.0**HIST_HI:
                over += 1
            else:
                k = min(max(math.floor(math.log10(v)), HIST_LO), HIST_HI - 1)
                # guard log10 rounding at exact decades
                if v < 10.0**k:
                    k -= 1
                elif k + 1 < HIST_HI and v >= 10.0 ** (k + 1):
                    k += 1
                counts[k - HIST_LO] += 1
        return cls(tuple(counts), under, over)

    def rows(self) -> list[tuple[float, float, int]]:
        e = self.edges()
        out = [(0.0, e[0], self.underflow)]
        out += [(e[i], e[i + 1], c) for i, c in enumerate(self.counts)]
        out.append((e[-1], math.inf, self.overflow))
        return out

    def mass_between(self, lo: float, hi: float) -> int:
        """Count in bins lying entirely inside [lo, hi)."""
        return sum(c for a, b, c in self.rows() if a >= lo and b <= hi)

    def to_dict(self) -> dict:
        return {"edges": self.edges(), "counts": list(self.counts),
                "underflow": self.underflow, "overflow": self.overflow}

    @classmethod
    def from_dict(cls, doc: dict) -> "Histogram":
        return cls(tuple(doc["counts"]), int(doc["underflow"]), int(doc["overflow"]))


@dataclass(frozen=True)
class CampaignReport:
    spec: ConstellationSpec
    p: int
    c: int
    kind: str
    trials: int
    successes: int
    success_rate: float
    min_F: float
    histogram: Histogram

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.label(),
            "p": self.p,
            "c": self.c,
            "kind": self.kind,
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "min_F": self.min_F,
            "histogram": self.histogram.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CampaignReport":
        return cls(parse_spec(doc["spec"]), int(doc["p"]), int(doc["c"]), doc["kind"], int(doc["trials"]),
                   int(doc["successes"]), float(doc["success_rate"]), float(doc["min_F"]),
                   Histogram.from_dict(doc["histogram"]))


def aggregate(spec: ConstellationSpec, records) -> CampaignReport:
    records = sorted(records, key=lambda r: r.trial)
    cl = classify(spec)
    n = len(records)
    succ = sum(r.success for r in records)
    fs = [r.final_f for r in records]
    return CampaignReport(
        spec=spec, p=cl.p, c=cl.c, kind=cl.kind, trials=n, successes=succ,
        success_rate=100.0 * succ / n if n else 0.0,
        min_F=min(fs) if fs else math.inf,
        histogram=Histogram.of(fs),
    )


def _load_existing(path: Path, cfg: CampaignConfig) -> dict[int, TrialRecord]:
    done = {}
    docs = read_ndjson(path)
    for doc in docs:
        rec = TrialRecord.from_dict(doc)
        if rec.seed != seed_string(cfg.master_seed, rec.trial):
            raise ValueError(f"{path}: record for trial {rec.trial} has seed {rec.seed}; "
                             "it belongs to a different campaign")
        if rec.trial < cfg.trials:
            done[rec.trial] = rec
    # rewrite so a truncated tail line cannot corrupt later appends
    path.write_text("".join(r.to_json() + "\n" for r in sorted(done.values(), key=lambda r: r.trial)))
    return done


def run_campaign(cfg: CampaignConfig, records_path=None, progress=None) -> CampaignReport:
    """Run (or resume) a campaign; records are appended to ``records_path`` as trials finish."""
    squared = cfg.objective == "squared"
    done: dict[int, TrialRecord] = {}
    sink = None
    if records_path is not None:
        records_path = Path(records_path)
        records_path.parent.mkdir(parents=True, exist_ok=True)
        if records_path.exists():
            done = _load_existing(records_path, cfg)
            if done:
                log.info("resuming %s: %d of %d trials done", records_path, len(done), cfg.trials)
        sink = open(records_path, "a")
    todo = [t for t in range(cfg.trials) if t not in done]

    def emit(rec: TrialRecord):
        done[rec.trial] = rec
        if sink is not None:
            sink.write(rec.to_json() + "\n")
            sink.flush()
        if progress is not None:
            progress(rec)

    try:
        tasks = [(cfg.spec, cfg.master_seed, t, cfg.lm, squared) for t in todo]
        if cfg.workers == 1 or len(tasks) <= 1:
            for task in tasks:
                emit(_trial_task(task))
        else:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                futures = [pool.submit(_trial_task, task) for task in tasks]
                for fut in as_completed(futures):
                    emit(fut.result())
    finally:
        if sink is not None:
            sink.close()
    return aggregate(cfg.spec, done.values())


def spec_seed(master_seed: int, spec: ConstellationSpec) -> int:
    """Per-spec master seed for sweeps, so different cells draw independent streams."""
    ss = np.random.SeedSequence([int(master_seed), spec.d, *spec.counts])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sweep(top: ConstellationSpec, trials: int = 100, master_seed: int = 0, lm: LmConfig | None = None,
          workers: int = 1, out_dir=None, objective: str = "abs", progress=None) -> list[CampaignReport]:
    reports = []
    for spec in enumerate_subspecs(top):
        cfg = CampaignConfig(spec, trials, spec_seed(master_seed, spec), lm or LmConfig(), workers, objective)
        path = None if out_dir is None else Path(out_dir) / f"records_{spec.label().replace(':', '_')}.ndjson"
        rep = run_campaign(cfg, path)
        log.info("%s: %d/%d successes, min F %.3g", spec, rep.successes, rep.trials, rep.min_F)
        if progress is not None:
            progress(rep)
        reports.append(rep)
    return reports


TABLE_HEADER = ["x", "y", "z", "p", "kind", "rate", "min_f"]


def table_row(rep: CampaignReport) -> list:
    xyz = list(rep.spec.extra) + [0] * (3 - len(rep.spec.extra))
    return [*xyz[:3], rep.p, rep.kind, f"{rep.success_rate:.2f}", f"{rep.min_F:.6g}"]


@dataclass(frozen=True)
class TallyEntry:
    spec: ConstellationSpec
    direct: int
    implied: int
    trials: int

    @property
    def total(self) -> int:
        return self.direct + self.implied


def lattice_tally(reports) -> tuple[list[TallyEntry], int]:
    """Add detections implied by containment; count negatives implied for the top spec.

    A success on a spec also exhibits every spec it contains, so each spec's
    implied count is the sum of successes over the strictly larger specs.  The
    second return value is the total number of trials spent on specs with no
    success at all, each of which counts against the maximal spec.
    """
    reports = list(reports)
    entries = []
    for rep in reports:
        implied = sum(o.successes for o in reports if o.spec != rep.spec and leq(rep.spec, o.spec))
        entries.append(TallyEntry(rep.spec, rep.successes, implied, rep.trials))
    negatives = sum(rep.trials for rep in reports if rep.successes == 0)
    return entries, negatives
