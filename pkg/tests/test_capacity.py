import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clonecap.capacity import (
    EntropySpec,
    cloning_capacity_closed_form,
    cloning_capacity_table,
    coherent_information,
    coherent_information_max,
    covariant_capacity,
    holevo_bruteforce,
    holevo_quantity,
    min_output_entropy,
    output_entropy,
    renyi_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from clonecap.channels import (
    PureQubitInput,
    bloch_state,
    cloning_channel,
    complement_channel,
    depolarizing,
    identity_channel,
)
from clonecap.errors import ContractError, CovarianceViolation, DomainError
from clonecap.linalg import ket_to_density, random_density, random_pure

# frozen 20-digit values from tests/oracles/generate_oracles.py (mpmath)
CAPACITY_ORACLE = {
    2: 1.0,
    3: 0.66666666666666666667,
    4: 0.54085208297275524261,
    5: 0.47548875021634685444,
    8: 0.38999462920419753986,
    16: 0.32944053263829362396,
    32: 0.3027504940607359413,
    64: 0.29034862584001164228,
}
MOE_ORACLE = {
    3: 0.91829583405448951479,
    4: 1.4591479170272447574,
    5: 1.8464393446710154934,
    8: 2.6100053707958024601,
    16: 3.670559467361706376,
    32: 4.6972495059392640587,
    64: 5.7096513741599883577,
}
COMPLEMENT_3_CAPACITY = 0.081704165945510485213
MIN_ENTROPY_PROXY = 0.58554804876992610756
H_THIRD = math.log2(3) - 2 / 3


def test_entropy_examples(rng):
    assert von_neumann_entropy(ket_to_density(random_pure(3, rng))) == pytest.approx(0, abs=1e-12)
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2, abs=1e-14)
    assert von_neumann_entropy(np.diag([0, 1, 2]) / 3) == pytest.approx(MOE_ORACLE[3], abs=1e-14)
    assert renyi_entropy(np.eye(2) / 2, 2) == pytest.approx(1, abs=1e-14)
    assert renyi_entropy(np.diag([2, 1]) / 3, 1000) == pytest.approx(MIN_ENTROPY_PROXY, abs=1e-12)
    for p in (0.5, 2, 7):
        assert renyi_entropy(ket_to_density(random_pure(4, rng)), p) == pytest.approx(0, abs=1e-10)


def test_entropy_rejects_bad_input():
    with pytest.raises(DomainError):
        renyi_entropy(np.eye(2) / 2, 0)
    with pytest.raises(DomainError):
        EntropySpec(-1.0)
    with pytest.raises(ContractError):
        von_neumann_entropy(np.diag([1.5, -0.5]))


def test_renyi_limit_matches_von_neumann(rng):
    for _ in range(10):
        rho = random_density(3, rng)
        s1 = EntropySpec(1)(rho)
        assert abs(EntropySpec(1 + 1e-4)(rho) - s1) <= 1e-4
        assert abs(EntropySpec(1 - 1e-4)(rho) - s1) <= 1e-4
        assert abs(renyi_entropy(rho, 1 + 1e-7) - s1) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 5), st.floats(0.1, 5))
def test_renyi_monotone_in_order(seed, p, q):
    rho = random_density(3, np.random.default_rng(seed))
    lo, hi = sorted((p, q))
    assert renyi_entropy(rho, lo) >= renyi_entropy(rho, hi) - 1e-12


def test_entropy_invariant_under_conjugation(rng):
    for _ in range(100):
        rho = random_density(int(rng.integers(2, 6)), rng)
        assert abs(von_neumann_entropy(rho) - von_neumann_entropy(rho.conj())) <= 1e-12


def test_shannon():
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(1)
    assert shannon_entropy([1.0, 0.0]) == 0


def test_moe_examples():
    assert min_output_entropy(cloning_channel(2), restarts=4).value == pytest.approx(0, abs=1e-10)
    assert min_output_entropy(cloning_channel(3), restarts=4).value == pytest.approx(H_THIRD, abs=1e-8)
    assert min_output_entropy(complement_channel(3), restarts=4).value == pytest.approx(H_THIRD, abs=1e-8)


@pytest.mark.parametrize("ell", sorted(MOE_ORACLE))
def test_moe_matches_oracle(ell):
    assert abs(min_output_entropy(cloning_channel(ell), restarts=4).value - MOE_ORACLE[ell]) <= 1e-8


def test_moe_witness_is_a_pure_input():
    res = min_output_entropy(cloning_channel(4), restarts=2)
    assert isinstance(res.witness, PureQubitInput)
    assert res.evaluations > 0


@pytest.mark.parametrize("ell", [3, 4, 6, 10])
def test_flat_landscape(ell, rng):
    vals = [output_entropy(cloning_channel(ell), PureQubitInput.random(rng).density) for _ in range(50)]
    assert max(vals) - min(vals) <= 1e-10


@pytest.mark.parametrize("ell", [3, 4])
def test_mixed_inputs_never_beat_pure_minimum(ell, rng):
    ch = cloning_channel(ell)
    s_min = min_output_entropy(ch, restarts=4).value
    for _ in range(100):
        assert output_entropy(ch, random_density(2, rng)) >= s_min - 1e-12


def test_closed_form_examples():
    assert cloning_capacity_closed_form(2) == 1.0
    assert cloning_capacity_closed_form(3) == pytest.approx(2 / 3, abs=1e-15)
    four = 1 - math.log2(3) + (2 + 3 * math.log2(3)) / 6
    assert cloning_capacity_closed_form(4) == pytest.approx(four, abs=1e-15)
    with pytest.raises(DomainError):
        cloning_capacity_closed_form(1)


@pytest.mark.parametrize("ell", sorted(CAPACITY_ORACLE))
def test_closed_form_matches_oracle(ell):
    assert abs(cloning_capacity_closed_form(ell) - CAPACITY_ORACLE[ell]) <= 1e-14


def test_vectorised_table_matches_scalar():
    table = cloning_capacity_table(300)
    scalar = np.array([cloning_capacity_closed_form(ell) for ell in range(2, 301)])
    assert np.abs(table - scalar).max() <= 1e-13


def test_capacity_decreases_in_ell():
    assert np.all(np.diff(cloning_capacity_table(500)) < 0)


@pytest.mark.parametrize("ell", [2, 3, 4, 7, 12])
def test_covariant_capacity_matches_closed_form(ell):
    rep = covariant_capacity(cloning_channel(ell), restarts=4)
    assert rep.method == "covariant-closed-form"
    assert rep.log_f == pytest.approx(math.log2(ell), abs=1e-12)
    assert rep.c_hol == pytest.approx(rep.log_f - rep.s_min, abs=0)
    assert abs(rep.c_hol - cloning_capacity_closed_form(ell)) <= 1e-8


def test_complement_capacity():
    rep = covariant_capacity(complement_channel(3), restarts=4)
    assert abs(rep.c_hol - COMPLEMENT_3_CAPACITY) <= 1e-8


def test_covariant_capacity_refuses_non_covariant(rng):
    from clonecap.channels import random_qubit_channel

    with pytest.raises(CovarianceViolation):
        covariant_capacity(random_qubit_channel(2, 2, rng))


def test_holevo_quantity_of_orthogonal_pair():
    outs = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    assert holevo_quantity(outs, np.array([0.5, 0.5])) == pytest.approx(1)


def test_holevo_examples():
    assert holevo_bruteforce(identity_channel(2), m=2, restarts=4).value == pytest.approx(1, abs=1e-4)
    cl2 = holevo_bruteforce(cloning_channel(3), m=2, restarts=4).value
    assert abs(cl2 - 2 / 3) <= 1e-4
    assert cl2 <= 2 / 3 + 1e-6
    assert abs(holevo_bruteforce(depolarizing(2, 0.0), m=2, restarts=2).value) <= 1e-6


def test_holevo_rejects_bad_arguments():
    with pytest.raises(DomainError):
        holevo_bruteforce(identity_channel(2), m=1)
    with pytest.raises(DomainError):
        holevo_bruteforce(identity_channel(3))


def test_coherent_information_examples():
    val, r = coherent_information_max(3)
    assert val == pytest.approx(math.log2(3) - 1, abs=1e-10)
    assert r == 0.0
    assert coherent_information(5, np.eye(2) / 2) == pytest.approx(math.log2(5) - 2, abs=1e-12)
    # two outputs: identity channel with a trivial environment
    assert coherent_information(2, bloch_state(0.0, (0, 0, 1))) == pytest.approx(1, abs=1e-12)
    assert coherent_information(2, bloch_state(1.0, (0, 0, 1))) == pytest.approx(0, abs=1e-12)
    assert coherent_information_max(2) == (pytest.approx(1, abs=1e-12), 0.0)


@pytest.mark.parametrize("ell", [3, 4, 5, 8])
def test_coherent_information_peaks_at_maximally_mixed_input(ell):
    val, r = coherent_information_max(ell, direction=(1, 1, 0))
    assert r == 0.0
    assert val == pytest.approx(math.log2(ell) - math.log2(ell - 1), abs=1e-10)
