"""Known MU base sets used as ground truth: prime-dimension complete sets,
the qubit triple, and tensor-product triples such as d = 6 = 2 x 3."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import ConstellationSpec, StateSet, leq

MAX_PRIME = 13


@dataclass(frozen=True, eq=False)
class MuBasesSet:
    d: int
    bases: tuple[np.ndarray, ...]  # each (d, d), one basis vector per row
    provenance: str

    def as_state_set(self) -> StateSet:
        return StateSet(self.d, self.bases, provenance=self.provenance)

    @property
    def full_spec(self) -> ConstellationSpec:
        return ConstellationSpec(self.d, (self.d - 1,) * len(self.bases))


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


def prime_complete_set(p: int) -> MuBasesSet:
    """Standard basis plus the p bases ``v_j[k] = w^(a k^2 + j k) / sqrt(p)``, a = 0..p-1."""
    if not (_is_prime(p) and p % 2 == 1):
        raise ValueError(f"{p} is not an odd prime")
    if p > MAX_PRIME:
        raise ValueError(f"p={p} exceeds the supported maximum {MAX_PRIME}")
    k = np.arange(p)
    bases = [np.eye(p, dtype=np.complex128)]
    for a in range(p):
        expo = (a * k[None, :] ** 2 + k[:, None] * k[None, :]) % p
        bases.append(np.exp(2j * np.pi * expo / p) / np.sqrt(p))
    return MuBasesSet(p, tuple(bases), f"prime {p}")


def qubit_complete_set() -> MuBasesSet:
    s = 1 / np.sqrt(2)
    z = np.eye(2, dtype=np.complex128)
    x = s * np.array([[1, 1], [1, -1]], dtype=np.complex128)
    y = s * np.array([[1, 1j], [1, -1j]], dtype=np.complex128)
    return MuBasesSet(2, (z, x, y), "qubit")


def complete_set(d: int) -> MuBasesSet:
    return qubit_complete_set() if d == 2 else prime_complete_set(d)


def tensor_triple(d1: int, d2: int) -> MuBasesSet:
    """Three MU bases in C^(d1 d2) from products of the first three bases of each factor."""
    for f in (d1, d2):
        if not (f == 2 or (_is_prime(f) and f <= MAX_PRIME)):
            raise ValueError(f"factor {f} has no supported complete set (need 2 or an odd prime)")
    a, b = complete_set(d1), complete_set(d2)
    bases = tuple(np.einsum("ik,jl->ijkl", a.bases[i], b.bases[i]).reshape(d1 * d2, d1 * d2)
                  for i in range(3))
    return MuBasesSet(d1 * d2, bases, f"tensor {d1} {d2}")


def subconstellation(mub: MuBasesSet, spec: ConstellationSpec) -> StateSet:
    """Keep the leading ``x_b`` vectors of basis ``b`` (``d-1`` of the first)."""
    if spec.d != mub.d:
        raise ValueError(f"dimension mismatch: {spec.d} vs {mub.d}")
    if not spec.restricted:
        raise ValueError(f"{spec} is not restricted")
    if not leq(spec, mub.full_spec):
        raise ValueError(f"{spec} is not contained in {mub.full_spec}")
    groups = tuple(mub.bases[b][:x] for b, x in enumerate(spec.counts))
    return StateSet(mub.d, groups, provenance=f"{mub.provenance} | {spec.label()}")
