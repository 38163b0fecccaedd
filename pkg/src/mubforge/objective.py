"""Sum-of-squares objective F whose zeros are exactly the MU constellations.

Indices follow the usual labelling: group ``b = 0`` is the complete first
basis, groups ``b >= 1`` hold the free vectors, members ``j`` count from 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .backend import get_kernel
from .constellation import ConstellationSpec, ParameterPoint, StateSet, classify


def chi(b: int, j: int, b2: int, j2: int, d: int) -> float:
    """Target modulus of <psi_j^b | psi_j2^b2>."""
    if b == b2:
        return 1.0 if j == j2 else 0.0
    return 1.0 / np.sqrt(d)


@dataclass(frozen=True, eq=False)
class ResidualSystem:
    """One residual per unordered pair of distinct states in groups 1..m.

    ``pu``/``pw`` index the flattened free vectors (0 is the all-ones anchor).
    """

    spec: ConstellationSpec
    pair_index: tuple[tuple[int, int, int, int], ...]
    pu: np.ndarray
    pw: np.ndarray
    target: np.ndarray

    @property
    def n_vectors(self) -> int:
        return self.spec.s

    def __len__(self):
        return len(self.pair_index)


@lru_cache(maxsize=256)
def residual_system(spec: ConstellationSpec) -> ResidualSystem:
    classify(spec)
    labels = [(b, j) for b, x in enumerate(spec.extra, start=1) for j in range(1, x + 1)]
    pairs, pu, pw, target = [], [], [], []
    for u in range(len(labels)):
        for w in range(u + 1, len(labels)):
            (b, j), (b2, j2) = labels[u], labels[w]
            pairs.append((b, j, b2, j2))
            pu.append(u)
            pw.append(w)
            target.append(chi(b, j, b2, j2, spec.d))
    arrays = [np.array(pu, dtype=np.int64), np.array(pw, dtype=np.int64), np.array(target)]
    for a in arrays:
        a.setflags(write=False)
    return ResidualSystem(spec, tuple(pairs), *arrays)


@dataclass(frozen=True)
class ObjectiveEval:
    value: float
    residuals: np.ndarray
    jacobian: np.ndarray | None = None


def evaluate(point: ParameterPoint, with_jacobian: bool = False, squared: bool = False,
             kernel: str | None = None) -> ObjectiveEval:
    """F at ``point``; ``squared`` selects the |<>|^2 - chi^2 residual variant."""
    rs = residual_system(point.spec)
    k = get_kernel(kernel)
    args = (point.angles, point.spec.d, rs.n_vectors, rs.pu, rs.pw, rs.target, squared)
    if with_jacobian:
        r, J = k.residuals_jacobian(*args)
    else:
        r, J = k.residuals(*args), None
    return ObjectiveEval(float(r @ r), r, J)


def objective_value(states: StateSet, squared: bool = False) -> float:
    """F computed directly on the groups after the first one of a state set."""
    rest = states.groups[1:]
    if not rest:
        return 0.0
    vecs = np.concatenate(rest, axis=0)
    grp = np.concatenate([np.full(len(g), b) for b, g in enumerate(rest)])
    ov = np.abs(vecs.conj() @ vecs.T)
    iu, iw = np.triu_indices(len(vecs), k=1)
    target = np.where(grp[iu] == grp[iw], 0.0, 1.0 / np.sqrt(states.d))
    a = ov[iu, iw]
    r = a * a - target * target if squared else a - target
    return float(r @ r)


class FUpperBound(NamedTuple):
    value: float
    printed: float


def f_upper_bound(spec: ConstellationSpec) -> FUpperBound:
    """F at the all-coincident configuration, and the variant with an unsquared coefficient.

    ``value`` uses ``(1 - 1/sqrt(d))**2`` and equals F at that point;
    ``printed`` uses ``(1 - 1/sqrt(d))`` and reproduces the commonly quoted
    maxima (33.2 for {5^2,4,1}_6, 25.0 for {5,3^3}_6).
    """
    classify(spec)
    x = np.array(spec.extra, dtype=np.int64)
    within = 0.5 * float(np.sum(x * (x - 1)))
    cross = 0.5 * float(x.sum() ** 2 - np.sum(x * x))
    coef = 1.0 - 1.0 / np.sqrt(spec.d)
    return FUpperBound(within + coef * coef * cross, within + coef * cross)


class MuCheck(NamedTuple):
    ok: bool
    max_deviation: float
    worst_pair: tuple[int, int, int, int] | None


def verify_mu(states: StateSet, tol: float = 1e-9) -> MuCheck:
    """Check every pair of states, all groups included, against the MU moduli.

    Self-pairs are included so non-normalized vectors are caught too.
    """
    vecs = states.vectors()
    if len(vecs) == 0:
        return MuCheck(True, 0.0, None)
    labels = [(b, j + 1) for b, j in states.labels()]
    grp = np.array([b for b, _ in labels])
    ov = np.abs(vecs.conj() @ vecs.T)
    same = grp[:, None] == grp[None, :]
    target = np.where(same, np.eye(len(vecs)), 1.0 / np.sqrt(states.d))
    dev = np.triu(np.abs(ov - target))
    i, k = np.unravel_index(int(np.argmax(dev)), dev.shape)
    worst = float(dev[i, k])
    return MuCheck(worst <= tol, worst, (*labels[i], *labels[k]))
