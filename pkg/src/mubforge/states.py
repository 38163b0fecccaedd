"""Small complex-vector kernel: inner products, projectors, basis completion."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

MAX_DIM = 16

PRE_TOL = 1e-10
POST_TOL = 1e-9
PHASE_EPS = 1e-10


def as_vector(v) -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {a.shape}")
    if not 2 <= a.size <= MAX_DIM:
        raise ValueError(f"dimension {a.size} outside [2, {MAX_DIM}]")
    return a


def inner(a, b) -> complex:
    """Return <a|b>, conjugate-linear in ``a``."""
    a = as_vector(a)
    b = as_vector(b)
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


def norm(a) -> float:
    return float(np.linalg.norm(as_vector(a)))


def is_unit(a, tol: float = 1e-12) -> bool:
    return abs(inner(a, a).real - 1.0) < tol


def projector(v) -> np.ndarray:
    """Rank-1 projector |v><v| (``v`` is not normalized here)."""
    v = as_vector(v)
    return np.outer(v, v.conj())


def fix_phase(v, eps: float = PHASE_EPS) -> np.ndarray:
    """Rotate the global phase so the first non-negligible component is real positive."""
    v = np.array(v, dtype=np.complex128)
    for c in v:
        if abs(c) > eps:
            return v * (abs(c) / c)
    return v


def gram(vs: Sequence) -> np.ndarray:
    m = np.asarray(vs, dtype=np.complex128)
    return m.conj() @ m.T


def complete_basis(vs: Sequence) -> np.ndarray:
    """Return the unit vector orthogonal to ``d - 1`` orthonormal vectors in C^d.

    The completion is read off the rank-1 projector ``I - sum |v_j><v_j|``:
    its largest-norm column is normalized and phase-fixed so that the first
    non-zero component is real positive.
    """
    m = np.asarray(vs, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError("expected a list of vectors")
    k, d = m.shape
    if not 2 <= d <= MAX_DIM:
        raise ValueError(f"dimension {d} outside [2, {MAX_DIM}]")
    if k != d - 1:
        raise ValueError(f"need {d - 1} vectors in C^{d}, got {k}")
    dev = np.max(np.abs(gram(m) - np.eye(k)))
    if dev > PRE_TOL:
        raise ValueError(f"inputs are not orthonormal (Gram deviation {dev:.3g})")
    P = np.eye(d, dtype=np.complex128) - m.T @ m.conj()
    cols = np.linalg.norm(P, axis=0)
    best = int(np.argmax(cols))
    if cols[best] < 1e-6:
        raise ValueError("residual projector is numerically zero")
    v = P[:, best] / cols[best]
    v = fix_phase(v)
    overlap = np.max(np.abs(m.conj() @ v))
    if overlap > POST_TOL:
        raise ArithmeticError(f"completion not orthogonal to inputs ({overlap:.3g})")
    return v
