import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from mubforge.constellation import ConstellationSpec, StateSet, realize
from mubforge.constructions import prime_complete_set, subconstellation, tensor_triple
from mubforge.equivalence import apply_global_unitary, apply_vector_phases, dephase, permute_within, swap_groups
from mubforge.objective import evaluate, objective_value, verify_mu
from mubforge.search import random_point


def _moduli(states):
    v = states.vectors()
    return np.abs(v.conj() @ v.T)


def _sample(seed):
    spec = ConstellationSpec(5, (4, 3, 3, 1))
    return realize(random_point(spec, seed))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_invariances(seed):
    states = _sample(seed)
    rng = np.random.default_rng(seed)
    base = objective_value(states)
    U = unitary_group.rvs(5, random_state=rng)
    assert np.allclose(_moduli(apply_global_unitary(states, U)), _moduli(states), atol=1e-12)
    ph = [rng.uniform(0, 6.3, n) for n in states.sizes]
    assert np.allclose(_moduli(apply_vector_phases(states, ph)), _moduli(states), atol=1e-12)
    perms = [rng.permutation(n) for n in states.sizes]
    assert objective_value(permute_within(states, perms)) == pytest.approx(base, rel=1e-12)
    swapped = swap_groups(states, 1, 2)
    assert objective_value(swapped) == pytest.approx(base, rel=1e-12)


def test_invalid_transformations():
    states = _sample(1)
    with pytest.raises(ValueError):
        apply_global_unitary(states, np.ones((5, 5)))
    with pytest.raises(ValueError):
        apply_global_unitary(states, np.eye(4))
    with pytest.raises(IndexError):
        swap_groups(states, 0, 4)
    with pytest.raises(ValueError):
        permute_within(states, [[0, 0, 1, 2], [0, 1, 2], [0, 1, 2], [0]])
    with pytest.raises(ValueError):
        apply_vector_phases(states, [[0.0]])


def test_dephase_round_trip(rng):
    states = _sample(42)
    U = unitary_group.rvs(5, random_state=rng)
    scrambled = apply_vector_phases(apply_global_unitary(states, U),
                                    [rng.uniform(0, 6.3, n) for n in states.sizes])
    res = dephase(scrambled)
    assert res.point is not None and res.point.spec == ConstellationSpec(5, (4, 3, 3, 1))
    assert evaluate(res.point).value == pytest.approx(objective_value(states), rel=1e-9)
    assert np.allclose(_moduli(res.states), _moduli(states), atol=1e-10)


def test_dephase_idempotent():
    st0 = subconstellation(prime_complete_set(5), ConstellationSpec(5, (4, 4, 2)))
    once = dephase(st0)
    twice = dephase(once.states)
    assert once.states.allclose(twice.states, 1e-10)
    assert np.allclose(once.point.angles, twice.point.angles, atol=1e-10)


def test_dephased_shape():
    res = dephase(prime_complete_set(3).as_state_set())
    g = res.states.groups
    assert np.allclose(g[0], np.eye(3), atol=1e-12)
    assert np.allclose(g[1][0], np.ones(3) / np.sqrt(3), atol=1e-12)
    for grp in g[1:]:
        assert np.allclose(grp[:, 0].imag, 0, atol=1e-12) and np.all(grp[:, 0].real > 0)
        assert np.allclose(np.abs(grp), 1 / np.sqrt(3), atol=1e-12)
    # full later bases: no restricted parameter point
    assert res.point is None
    assert verify_mu(res.states, 1e-10).ok


def test_dephase_tensor_solution_gives_zero():
    st0 = subconstellation(tensor_triple(2, 3), ConstellationSpec(6, (5, 5, 5)))
    U = unitary_group.rvs(6, random_state=3)
    res = dephase(apply_global_unitary(st0, U))
    assert evaluate(res.point).value < 1e-20


def test_dephase_rejects():
    eye = np.eye(4, dtype=complex)
    with pytest.raises(ValueError):
        dephase(StateSet(4, (eye[:2],)))
    with pytest.raises(ValueError):
        dephase(StateSet(4, (eye, eye[:1])))  # not unbiased
    bad = eye.copy()
    bad[1] = bad[0]
    with pytest.raises(ValueError):
        dephase(StateSet(4, (bad,)))
