"""Transformations that preserve every |<psi|psi'>|, and dephasing to canonical form."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .constellation import ParameterPoint, StateSet, extract_angles
from .states import complete_basis, fix_phase

UNITARY_TOL = 1e-10
GROUP0_TOL = 1e-8
MODULUS_TOL = 1e-6


def apply_global_unitary(states: StateSet, U) -> StateSet:
    U = np.asarray(U, dtype=np.complex128)
    d = states.d
    if U.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {U.shape}")
    dev = np.max(np.abs(U.conj().T @ U - np.eye(d)))
    if dev > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (deviation {dev:.3g})")
    return StateSet(d, tuple(g @ U.T for g in states.groups), states.provenance)


def apply_vector_phases(states: StateSet, phases) -> StateSet:
    """Multiply member ``j`` of group ``b`` by ``exp(i phases[b][j])``."""
    if len(phases) != len(states.groups):
        raise ValueError("need one phase list per group")
    groups = []
    for g, th in zip(states.groups, phases):
        th = np.asarray(th, dtype=np.float64)
        if th.shape != (len(g),):
            raise ValueError(f"expected {len(g)} phases, got shape {th.shape}")
        groups.append(g * np.exp(1j * th)[:, None])
    return StateSet(states.d, tuple(groups), states.provenance)


def swap_groups(states: StateSet, b: int, b2: int) -> StateSet:
    n = len(states.groups)
    if not (0 <= b < n and 0 <= b2 < n):
        raise IndexError(f"group index out of range for {n} groups")
    groups = list(states.groups)
    groups[b], groups[b2] = groups[b2], groups[b]
    return StateSet(states.d, tuple(groups), states.provenance)


def permute_within(states: StateSet, perms) -> StateSet:
    """Reorder members: new group ``b`` is ``old[b][perms[b]]``."""
    if len(perms) != len(states.groups):
        raise ValueError("need one permutation per group")
    groups = []
    for g, perm in zip(states.groups, perms):
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(len(g))):
            raise ValueError(f"{perm.tolist()} is not a permutation of range({len(g)})")
        groups.append(g[perm])
    return StateSet(states.d, tuple(groups), states.provenance)


class Dephased(NamedTuple):
    states: StateSet
    point: ParameterPoint | None


def dephase(states: StateSet) -> Dephased:
    """Bring a state set with a (d-1)- or d-member first group into dephased form.

    1. ``U_1`` maps the first group, completed to a basis, onto the standard basis.
    2. ``U_2 = diag(exp(-i delta))`` flattens the first vector of group 1.
    3. Per-vector phases make every first component real positive and restore
       the standard basis vectors.

    Later groups are reordered by decreasing size first (a relabelling), so the
    recovered angles follow the canonical layout.  ``point`` is ``None`` when
    some later group is a full basis or there are no later groups; empty
    groups are dropped.
    """
    d = states.d
    if not states.groups:
        raise ValueError("empty state set")
    g0 = states.groups[0]
    if len(g0) not in (d - 1, d):
        raise ValueError(f"first group must hold {d - 1} or {d} vectors, has {len(g0)}")
    dev = np.max(np.abs(g0.conj() @ g0.T - np.eye(len(g0))))
    if dev > GROUP0_TOL:
        raise ValueError(f"first group is not orthonormal (deviation {dev:.3g})")
    basis = g0 if len(g0) == d else np.vstack([g0, complete_basis(g0)])

    rest = sorted((g for g in states.groups[1:] if len(g)), key=len, reverse=True)
    U1 = basis.conj()
    g0n = g0 @ U1.T
    rest = [g @ U1.T for g in rest]

    for b, g in enumerate(rest, start=1):
        mod = np.abs(np.abs(g) - 1 / np.sqrt(d))
        if mod.size and mod.max() > MODULUS_TOL:
            j, k = np.unravel_index(int(np.argmax(mod)), mod.shape)
            raise ValueError(
                f"vector {j + 1} of group {b} is not unbiased to the first group "
                f"(component {k} deviates by {mod.max():.3g})"
            )

    if rest:
        first = rest[0][0]
        u2 = np.conj(first) / np.abs(first)
        g0n = g0n * u2
        rest = [g * u2 for g in rest]

    g0n = np.array([fix_phase(v) for v in g0n])
    rest = [g * (np.abs(g[:, :1]) / g[:, :1]) for g in rest]
    out = StateSet(d, (g0n, *rest), provenance=f"dephased {states.provenance}".strip())

    point = None
    if rest and all(len(g) <= d - 1 for g in rest):
        point = extract_angles(StateSet(d, (g0n[: d - 1], *rest)))
    return Dephased(out, point)
