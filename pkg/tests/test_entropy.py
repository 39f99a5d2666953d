import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyimono.entropy import check_alpha, renyi_entropy, renyi_from_spectrum, von_neumann_entropy
from renyimono.qcore import QuantumState
from renyimono.states import random_pure

from conftest import haar_unitary, random_density

LOG3 = math.log2(3)


@pytest.mark.parametrize(
    "rho, alpha, expected",
    [
        (np.eye(3) / 3, 3, LOG3),
        (np.diag([2 / 3, 1 / 3]), 3, LOG3 / 2),
        (np.eye(2) / 2, 0.5, 1.0),
        (np.eye(4) / 4, 7.5, 2.0),
    ],
)
def test_renyi_examples(rho, alpha, expected):
    assert abs(renyi_entropy(rho, alpha) - expected) < 1e-12


@pytest.mark.parametrize("alpha", [0.3, 2, 3, 10])
def test_pure_state_has_zero_entropy(alpha):
    psi = random_pure([2, 3], 4)
    assert renyi_entropy(psi, alpha) == 0.0
    assert abs(renyi_entropy(psi.matrix(), alpha)) < 1e-9


@pytest.mark.parametrize(
    "rho, expected",
    [
        (np.eye(2) / 2, 1.0),
        (np.diag([1.0, 0.0]), 0.0),
        (np.diag([2 / 3, 1 / 3]), LOG3 - 2 / 3),
    ],
)
def test_von_neumann_examples(rho, expected):
    assert abs(von_neumann_entropy(rho) - expected) < 1e-12


@pytest.mark.parametrize("alpha", [1, 1.0, 0, -2, float("nan")])
def test_alpha_out_of_domain(alpha):
    with pytest.raises(ValueError):
        check_alpha(alpha)


def test_alpha_one_points_to_von_neumann():
    with pytest.raises(ValueError, match="von_neumann"):
        renyi_entropy(np.eye(2) / 2, 1)


@pytest.mark.parametrize("alpha", [2, 3, 4])
def test_integer_alpha_matches_matrix_power(alpha, rng):
    # oracle: tr ρ^α by repeated multiplication, no eigendecomposition
    rho = random_density(rng, 5, 3)
    tr = np.trace(np.linalg.matrix_power(rho, alpha)).real
    assert abs(renyi_entropy(rho, alpha) - math.log2(tr) / (1 - alpha)) < 1e-10


def test_state_input_is_validated():
    bad = QuantumState.density(np.diag([0.5, 0.3]), [2])
    with pytest.raises(ValueError):
        renyi_entropy(bad, 2)


probs = st.lists(st.floats(0, 1), min_size=1, max_size=8).filter(lambda p: sum(p) > 1e-3)
alphas = st.floats(0.05, 20).filter(lambda a: abs(a - 1) > 1e-3)


@given(probs, alphas)
@settings(max_examples=200, deadline=None)
def test_entropy_bounded_by_log_rank(p, alpha):
    w = np.array(p) / sum(p)
    s = renyi_from_spectrum(w, alpha)
    assert -1e-12 <= s <= math.log2(np.count_nonzero(w)) + 1e-9


@given(probs, alphas, alphas)
@settings(max_examples=200, deadline=None)
def test_entropy_nonincreasing_in_alpha(p, a1, a2):
    w = np.array(p) / sum(p)
    lo, hi = sorted((a1, a2))
    assert renyi_from_spectrum(w, lo) >= renyi_from_spectrum(w, hi) - 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_additivity_and_invariance(seed):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(rng, 3), random_density(rng, 2, 1 + seed % 2)
    U = haar_unitary(rng, 3)
    for alpha in (0.5, 2, 3.3):
        joint = renyi_entropy(np.kron(rho, sigma), alpha)
        assert abs(joint - renyi_entropy(rho, alpha) - renyi_entropy(sigma, alpha)) < 1e-8
        assert abs(renyi_entropy(U @ rho @ U.conj().T, alpha) - renyi_entropy(rho, alpha)) < 1e-8
