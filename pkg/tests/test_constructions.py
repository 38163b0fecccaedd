import numpy as np
import pytest

from mubforge.constellation import ConstellationSpec
from mubforge.constructions import (
    complete_set,
    prime_complete_set,
    qubit_complete_set,
    subconstellation,
    tensor_triple,
)
from mubforge.objective import verify_mu


def _unitary(B):
    return np.max(np.abs(B.conj() @ B.T - np.eye(len(B))))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_prime_sets_are_complete_and_mu(p):
    mub = prime_complete_set(p)
    assert len(mub.bases) == p + 1
    assert all(_unitary(B) < 1e-12 for B in mub.bases)
    assert verify_mu(mub.as_state_set(), 1e-10).ok


@pytest.mark.parametrize("p", [1, 2, 4, 9, 17])
def test_prime_rejects(p):
    with pytest.raises(ValueError):
        prime_complete_set(p)


def test_qubit_and_dispatch():
    q = qubit_complete_set()
    assert verify_mu(q.as_state_set(), 1e-12).ok
    assert complete_set(2).provenance == "qubit"
    assert complete_set(5).d == 5


@pytest.mark.parametrize("d1,d2", [(2, 3), (3, 2), (2, 5), (3, 3), (2, 2)])
def test_tensor_triples(d1, d2):
    mub = tensor_triple(d1, d2)
    assert mub.d == d1 * d2 and len(mub.bases) == 3
    assert all(_unitary(B) < 1e-12 for B in mub.bases)
    assert verify_mu(mub.as_state_set(), 1e-10).ok


def test_tensor_rejects_bad_factor():
    with pytest.raises(ValueError):
        tensor_triple(2, 4)


def test_subconstellation():
    mub = tensor_triple(2, 3)
    spec = ConstellationSpec(6, (5, 4, 2))
    st = subconstellation(mub, spec)
    assert st.sizes == (5, 4, 2)
    assert np.array_equal(st.groups[1], mub.bases[1][:4])
    assert verify_mu(st, 1e-10).ok
    with pytest.raises(ValueError):
        subconstellation(mub, ConstellationSpec(6, (5, 5, 5, 5)))
    with pytest.raises(ValueError):
        subconstellation(mub, ConstellationSpec(5, (4, 4)))
    with pytest.raises(ValueError):
        subconstellation(mub, ConstellationSpec(6, (4, 4)))
