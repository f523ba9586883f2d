"""Monomial algebra against the dense-matrix oracle."""

import itertools

import numpy as np
import pytest

from majsim.algebra import MajoranaMonomial, ParitySector, commutes, multiply
from majsim.errors import ModeMismatchError

from oracles import monomial_matrix


def random_monomial(n_modes, rng, max_weight=None):
    n_maj = 2 * n_modes
    if max_weight is None:
        max_weight = n_maj
    weight = int(rng.integers(0, max_weight + 1))
    support = rng.choice(n_maj, size=weight, replace=False)
    return MajoranaMonomial(n_modes, tuple(int(s) for s in support),
                            phase_exp=int(rng.integers(0, 4)))


def test_gamma_squared_is_identity():
    g1 = MajoranaMonomial.gamma(1, 2)
    assert g1 * g1 == MajoranaMonomial.identity(2)


def test_anticommutation_of_distinct_gammas():
    g1 = MajoranaMonomial.gamma(1, 2)
    g2 = MajoranaMonomial.gamma(2, 2)
    forward = g1 * g2
    backward = g2 * g1
    assert forward.indices == backward.indices
    assert backward.phase_exp == (forward.phase_exp + 2) % 4


def test_canonicalization_sorts_and_tracks_sign():
    # gamma_2 gamma_1 = -gamma_1 gamma_2
    mon = MajoranaMonomial(2, (2, 1))
    assert mon.indices == (1, 2)
    assert mon.phase_exp == 2


def test_mode_count_mismatch_rejected():
    a = MajoranaMonomial.gamma(0, 2)
    b = MajoranaMonomial.gamma(0, 3)
    with pytest.raises(ModeMismatchError):
        multiply(a, b)


@pytest.mark.parametrize("seed", range(4))
def test_product_matches_matrix_oracle(seed):
    """200 random pairs at n=4: exact product vs the 16x16 matrix product."""
    n_modes = 4
    rng = np.random.default_rng(1000 + seed)
    for _ in range(50):
        a = random_monomial(n_modes, rng)
        b = random_monomial(n_modes, rng)
        product = a * b
        expected = monomial_matrix(a) @ monomial_matrix(b)
        assert np.allclose(monomial_matrix(product), expected, atol=1e-12)


def test_multiply_associative_on_random_triples():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b, c = (random_monomial(3, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_self_product_is_plus_or_minus_identity():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a = random_monomial(4, rng)
        square = a * a
        assert square.indices == ()
        assert square.phase_exp in (0, 2)


def test_commutes_examples():
    n = 3
    g = lambda *ix: MajoranaMonomial(n, ix)
    assert not commutes(g(1), g(2))
    assert commutes(g(1, 2), g(3, 4))
    assert not commutes(g(1, 2), g(2, 3))


def test_commutes_matches_matrix_oracle():
    rng = np.random.default_rng(23)
    for _ in range(150):
        a = random_monomial(3, rng)
        b = random_monomial(3, rng)
        ma, mb = monomial_matrix(a), monomial_matrix(b)
        truth = np.allclose(ma @ mb, mb @ ma, atol=1e-12)
        assert commutes(a, b) == truth


def test_conjugate_reverses_products():
    rng = np.random.default_rng(31)
    for _ in range(150):
        a = random_monomial(3, rng)
        b = random_monomial(3, rng)
        assert (a * b).conjugate() == b.conjugate() * a.conjugate()


def test_conjugate_matches_matrix_dagger():
    rng = np.random.default_rng(37)
    for _ in range(100):
        a = random_monomial(3, rng)
        assert np.allclose(monomial_matrix(a.conjugate()),
                           monomial_matrix(a).conj().T, atol=1e-12)


def test_hermiticity_detection():
    assert MajoranaMonomial.pair(0, 1, 1).is_hermitian()
    assert not MajoranaMonomial(1, (0, 1)).is_hermitian()
    assert MajoranaMonomial(2, (0, 1, 2, 3)).is_hermitian()


def test_parity_weight():
    assert MajoranaMonomial(2, (1, 2)).parity_weight() is ParitySector.EVEN
    assert MajoranaMonomial(2, (1,)).parity_weight() is ParitySector.ODD
    assert MajoranaMonomial(2, (0, 1, 2, 3)).parity_weight() is ParitySector.EVEN


def test_total_parity_commutes_with_even_monomials():
    """Exhaustive for n <= 4: P commutes with every even-weight monomial."""
    for n_modes in (1, 2, 3, 4):
        parity = MajoranaMonomial.total_parity(n_modes)
        majorana_ids = range(2 * n_modes)
        for weight in range(0, 2 * n_modes + 1, 2):
            for support in itertools.combinations(majorana_ids, weight):
                mon = MajoranaMonomial(n_modes, support)
                assert commutes(parity, mon)


def test_total_parity_is_hermitian_involution():
    for n_modes in (1, 2, 3, 4, 5):
        parity = MajoranaMonomial.total_parity(n_modes)
        assert parity.is_hermitian()
        assert parity * parity == MajoranaMonomial.identity(n_modes)


def test_wire_roundtrip_and_str():
    mon = MajoranaMonomial(3, (5, 0), phase_exp=1)
    again = MajoranaMonomial.from_wire(mon.to_wire(), 3)
    assert again == mon
    assert str(mon) in ("-i g0 g5",)  # i * (gamma_5 gamma_0) = -i gamma_0 gamma_5
