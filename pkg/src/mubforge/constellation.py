"""Constellation types {x}_d, their partial order and the dephased torus parameterization.

A restricted constellation ``{d-1, x_1, ..., x_m}_d`` is realized from
``p = (d-1)(s-1)`` angles, ``s = x_1 + ... + x_m``.  Group 0 holds the first
``d-1`` standard basis vectors; group 1 starts with the all-ones vector; every
other vector has first component ``1/sqrt(d)`` and ``d-1`` free phases.
Angles are consumed group-major, then vector, then component.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .states import MAX_DIM

TWO_PI = 2.0 * np.pi

UNDERDETERMINED = "underdetermined"
CRITICAL = "critical"
OVERDETERMINED = "overdetermined"


@dataclass(frozen=True)
class ConstellationSpec:
    """Integer signature of a constellation type, kept in canonical form.

    Counts are sorted decreasing with zeros suppressed, so ``{2,1,2,0}_4`` and
    ``{2,2,1}_4`` compare equal.
    """

    d: int
    counts: tuple[int, ...]

    def __post_init__(self):
        d = int(self.d)
        if not 2 <= d <= MAX_DIM:
            raise ValueError(f"dimension {d} outside [2, {MAX_DIM}]")
        counts = tuple(int(x) for x in self.counts)
        for x in counts:
            if not 0 <= x <= d - 1:
                raise ValueError(f"group size {x} outside [0, {d - 1}] for d={d}")
        canon = tuple(sorted((x for x in counts if x > 0), reverse=True))
        if len(canon) > d + 1:
            raise ValueError(f"at most {d + 1} groups in dimension {d}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "counts", canon)

    @property
    def restricted(self) -> bool:
        return bool(self.counts) and self.counts[0] == self.d - 1

    @property
    def extra(self) -> tuple[int, ...]:
        """Group sizes after the first complete basis."""
        return self.counts[1:]

    @property
    def s(self) -> int:
        return sum(self.extra)

    @property
    def n_params(self) -> int:
        return (self.d - 1) * (self.s - 1)

    def __str__(self):
        parts = []
        for x, grp in itertools.groupby(self.counts):
            n = len(list(grp))
            parts.append(f"{x}^{n}" if n > 1 else str(x))
        return "{" + ",".join(parts) + "}_" + str(self.d)

    def label(self) -> str:
        """CLI syntax, e.g. ``d=6:5,4,4,2``."""
        return f"d={self.d}:" + ",".join(map(str, self.counts))


_SPEC_RE = re.compile(r"^\s*d\s*=\s*(\d+)\s*:\s*(.+?)\s*$")


def parse_spec(text: str) -> ConstellationSpec:
    """Parse ``d=6:5,4,4,2`` or ``d=6:5,4^2,2`` into a canonical spec."""
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse constellation spec {text!r}; expected e.g. 'd=6:5,4^2,2'")
    d = int(m.group(1))
    counts: list[int] = []
    for tok in m.group(2).split(","):
        tok = tok.strip()
        mm = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
        if not mm:
            raise ValueError(f"bad group token {tok!r} in {text!r}")
        counts.extend([int(mm.group(1))] * int(mm.group(2) or 1))
    return ConstellationSpec(d, tuple(counts))


@dataclass(frozen=True)
class SpecClassification:
    p: int
    c: int
    s: int
    S: int
    kind: str


def _require_restricted(spec: ConstellationSpec):
    if not spec.restricted:
        raise ValueError(f"{spec} is not restricted: the first group must hold d-1={spec.d - 1} vectors")


def classify(spec: ConstellationSpec) -> SpecClassification:
    _require_restricted(spec)
    s = spec.s
    if s < 1:
        raise ValueError(f"{spec} has no group beyond the first basis")
    d = spec.d
    p = (d - 1) * (s - 1)
    c = s * (s - 1) // 2
    if c == p:
        kind = CRITICAL
    elif c > p:
        kind = OVERDETERMINED
    else:
        kind = UNDERDETERMINED
    return SpecClassification(p=p, c=c, s=s, S=d - 1 + s, kind=kind)


def leq(a: ConstellationSpec, b: ConstellationSpec) -> bool:
    """True if ``b`` contains ``a``.

    On decreasing-sorted counts an injective group matching exists iff the
    position-wise comparison holds.
    """
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")
    if len(a.counts) > len(b.counts):
        return False
    return all(x <= y for x, y in zip(a.counts, b.counts))


def enumerate_subspecs(top: ConstellationSpec, all_shapes: bool = False) -> list[ConstellationSpec]:
    """Restricted specs contained in ``top``, ordered by (s, counts).

    By default only specs with the same number of groups as ``top`` are
    returned, i.e. the cells of a ``{d-1,x,y,z}`` table.  With
    ``all_shapes=True`` every contained spec with at least one extra group is
    listed.
    """
    _require_restricted(top)
    d = top.d
    m = len(top.extra)
    if m == 0:
        return []
    shapes = range(1, m + 1) if all_shapes else [m]
    found = set()
    for k in shapes:
        for combo in itertools.combinations_with_replacement(range(d - 1, 0, -1), k):
            spec = ConstellationSpec(d, (d - 1, *combo))
            if leq(spec, top):
                found.add(spec)
    return sorted(found, key=lambda sp: (sp.s, sp.counts))


@dataclass(frozen=True)
class ParameterPoint:
    spec: ConstellationSpec
    angles: np.ndarray

    def __post_init__(self):
        _require_restricted(self.spec)
        a = np.array(self.angles, dtype=np.float64).reshape(-1)
        if a.size != self.spec.n_params:
            raise ValueError(f"{self.spec} needs {self.spec.n_params} angles, got {a.size}")
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)


@dataclass(frozen=True, eq=False)
class StateSet:
    """Groups of unit vectors in C^d; ``groups[b]`` has one vector per row."""

    d: int
    groups: tuple[np.ndarray, ...]
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        d = int(self.d)
        gs = []
        for g in self.groups:
            a = np.array(g, dtype=np.complex128)
            if a.size == 0:
                a = a.reshape(0, d)
            if a.ndim != 2 or a.shape[1] != d:
                raise ValueError(f"group of shape {a.shape} does not hold vectors in C^{d}")
            a.setflags(write=False)
            gs.append(a)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "groups", tuple(gs))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @cached_property
    def spec(self) -> ConstellationSpec:
        return ConstellationSpec(self.d, self.sizes)

    def vectors(self) -> np.ndarray:
        if not self.groups:
            return np.zeros((0, self.d), dtype=np.complex128)
        return np.concatenate(self.groups, axis=0)

    def labels(self) -> list[tuple[int, int]]:
        """(group, member) for each row of :meth:`vectors`, zero-based."""
        return [(b, j) for b, g in enumerate(self.groups) for j in range(len(g))]

    def allclose(self, other: "StateSet", atol: float = 1e-12) -> bool:
        return (
            self.d == other.d
            and self.sizes == other.sizes
            and all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.groups, other.groups))
        )


def phase_table(spec: ConstellationSpec, angles) -> np.ndarray:
    """Phases of every vector in groups 1.. as an ``(s, d)`` array; column 0 and row 0 are zero."""
    d = spec.d
    s = spec.s
    ph = np.zeros((s, d))
    ph[1:, 1:] = np.asarray(angles, dtype=np.float64).reshape(s - 1, d - 1)
    return ph


def realize(point: ParameterPoint) -> StateSet:
    spec = point.spec
    d = spec.d
    amps = np.exp(1j * phase_table(spec, point.angles)) / np.sqrt(d)
    groups = [np.eye(d, dtype=np.complex128)[: d - 1]]
    start = 0
    for x in spec.extra:
        groups.append(amps[start : start + x])
        start += x
    return StateSet(d, tuple(groups), provenance=f"realize {spec.label()}")


def extract_angles(states: StateSet) -> ParameterPoint:
    """Read the free phases back out of a state set already in dephased form."""
    spec = states.spec
    _require_restricted(spec)
    if states.sizes != spec.counts:
        raise ValueError("groups are not in canonical (decreasing size) order")
    d = states.d
    rest = np.concatenate(states.groups[1:], axis=0)
    rel = rest[1:, 1:] * np.conj(rest[1:, :1]) / np.abs(rest[1:, :1])
    angles = np.mod(np.angle(rel), TWO_PI)
    angles[angles >= TWO_PI] = 0.0
    return ParameterPoint(spec, angles.reshape(-1))
