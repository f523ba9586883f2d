"""Fermion-to-Majorana expansion and Hubbard/Trotter/UCC checks."""

import numpy as np
import pytest
from scipy.linalg import expm

from majsim.algebra import MajoranaMonomial
from majsim.circuits import enumerate_branches
from majsim.errors import CircuitError, InvalidMeasurementError
from majsim.fock import FockState, expectation
from majsim.hamiltonians import (
    FermionTerm,
    HubbardSpec,
    bulk_terms_per_site,
    fermion_to_majorana,
    hubbard,
    hubbard_fermion_terms,
    reference_prep_circuit,
    sorted_terms,
    trotter_step,
    ucc2_ansatz,
    ucc2_generator,
)

from oracles import (
    fermion_hamiltonian_matrix,
    majorana_hamiltonian_matrix,
    monomial_matrix,
    random_state,
)


def test_number_operator_expansion():
    """f0^dag f0 = 1/2 - (1/2) i gamma_0 gamma_1."""
    ham = fermion_to_majorana([FermionTerm((0,), (0,), 1.0)], 1)
    terms = {mon.indices: (coeff, mon.phase_exp) for coeff, mon in ham.terms}
    assert terms[()][0] == pytest.approx(0.5)
    coeff, phase_exp = terms[(0, 1)]
    assert phase_exp == 1  # the Hermitian representative i gamma_0 gamma_1
    assert coeff == pytest.approx(-0.5)


def test_hopping_expansion_matches_fermionic_matrix():
    terms = [FermionTerm((0,), (1,), 1.0), FermionTerm((1,), (0,), 1.0)]
    ham = fermion_to_majorana(terms, 2)
    assert all(mon.weight == 2 for _, mon in ham.terms)
    dense_fermion = fermion_hamiltonian_matrix(terms, 2)
    dense_majorana = majorana_hamiltonian_matrix(ham)
    assert np.allclose(dense_fermion, dense_majorana, atol=1e-12)


def test_empty_input_gives_empty_output():
    assert fermion_to_majorana([], 2).terms == []


def test_non_hermitian_input_rejected():
    with pytest.raises(InvalidMeasurementError):
        fermion_to_majorana([FermionTerm((0,), (1,), 1.0)], 2)


def test_expansion_is_spectrum_preserving_on_random_hamiltonians():
    rng = np.random.default_rng(50)
    n_modes = 4
    for _ in range(5):
        terms = []
        for _ in range(4):
            p, r = rng.choice(n_modes, size=2, replace=False)
            amp = complex(rng.standard_normal(), rng.standard_normal())
            terms.append(FermionTerm((int(p),), (int(r),), amp))
            terms.append(FermionTerm((int(r),), (int(p),), amp.conjugate()))
        p, q, r, s = (int(x) for x in rng.choice(n_modes, size=4, replace=False))
        amp = complex(rng.standard_normal(), rng.standard_normal())
        terms.append(FermionTerm((p, q), (r, s), amp))
        terms.append(FermionTerm((s, r), (q, p), amp.conjugate()))
        ham = fermion_to_majorana(terms, n_modes)
        ev_fermion = np.linalg.eigvalsh(fermion_hamiltonian_matrix(terms, n_modes))
        ev_majorana = np.linalg.eigvalsh(majorana_hamiltonian_matrix(ham))
        assert np.max(np.abs(ev_fermion - ev_majorana)) < 1e-10


# ----------------------------------------------------------------------
# Hubbard model
# ----------------------------------------------------------------------

def test_hubbard_1x1_spectrum():
    """No hopping: levels 0, -mu, -mu, U-2mu from the fermionic form."""
    spec = HubbardSpec(1, 1, t=1.0, u=3.0, mu=0.7)
    ham = hubbard(spec)
    ev = np.sort(np.linalg.eigvalsh(majorana_hamiltonian_matrix(ham)))
    expected = np.sort([0.0, -spec.mu, -spec.mu, spec.u - 2 * spec.mu])
    assert np.allclose(ev, expected, atol=1e-12)


@pytest.mark.parametrize("lx,ly", [(1, 1), (2, 1), (2, 2)])
def test_hubbard_fermion_vs_majorana_spectra(lx, ly):
    spec = HubbardSpec(lx, ly, t=1.0, u=4.0, mu=2.0)
    terms = hubbard_fermion_terms(spec)
    ham = hubbard(spec)
    ev_f = np.linalg.eigvalsh(fermion_hamiltonian_matrix(terms, spec.n_modes))
    ev_m = np.linalg.eigvalsh(majorana_hamiltonian_matrix(ham))
    assert np.max(np.abs(np.sort(ev_f) - np.sort(ev_m))) < 1e-10


def test_hubbard_constant_term():
    spec = HubbardSpec(2, 2, t=1.0, u=4.0, mu=2.0)
    ham = hubbard(spec)
    assert ham.constant() == pytest.approx(
        spec.n_sites * (spec.u / 4 - spec.mu))


def test_hubbard_bulk_term_count_is_11():
    spec = HubbardSpec(3, 3, t=1.0, u=2.0, mu=0.5)
    counts = bulk_terms_per_site(spec, hubbard(spec))
    center = spec.site_index(1, 1)
    assert counts[center] == 11
    corner = spec.site_index(0, 0)
    assert counts[corner] == 7  # two absent neighbors: 4+2+1


def test_hubbard_onsite_coefficients():
    spec = HubbardSpec(1, 1, t=0.9, u=4.0, mu=1.0)
    ham = hubbard(spec)
    by_weight = {}
    for coeff, mon in ham.nonconstant_terms():
        by_weight.setdefault(mon.weight, []).append(coeff)
    assert sorted(np.abs(by_weight[2])) == pytest.approx(
        [abs(spec.u - 2 * spec.mu) / 4] * 2)
    quartic_coeff, = by_weight[4]
    quartic_mon = [m for _, m in ham.terms if m.weight == 4][0]
    # coefficient -U/4 on the plain gamma product (phase_exp 0 is Hermitian)
    assert quartic_mon.phase_exp in (0, 2)
    signed = quartic_coeff * (1 if quartic_mon.phase_exp == 0 else -1)
    assert signed == pytest.approx(-spec.u / 4)


def test_hubbard_commutes_with_total_parity():
    spec = HubbardSpec(2, 2, t=1.0, u=4.0, mu=2.0)
    ham = hubbard(spec)
    parity = MajoranaMonomial.total_parity(spec.n_modes)
    for _, mon in ham.terms:
        assert mon.commutes_with(parity)


# ----------------------------------------------------------------------
# Trotter steps
# ----------------------------------------------------------------------

def _product_step_matrix(ham, dt):
    dim = 2 ** ham.n_modes
    out = np.eye(dim, dtype=complex)
    for coeff, mon in sorted_terms(ham):
        out = expm(1j * coeff * dt * monomial_matrix(mon)) @ out
    return out


def test_trotter_commuting_terms_exact():
    n_modes = 3
    ham = fermion_to_majorana(
        [FermionTerm((0,), (0,), 0.8), FermionTerm((1,), (1,), -0.4)], n_modes)
    dt = 0.37
    exact = expm(1j * dt * majorana_hamiltonian_matrix(ham))
    product = _product_step_matrix(ham, dt)
    phase_free = lambda m: m / np.exp(1j * np.angle(m[0, 0]))
    assert np.max(np.abs(phase_free(exact) - phase_free(product))) < 1e-10


def test_trotter_first_order_error_scaling():
    """Single-step error quarters when dt halves: fit exponent 2.0 +/- 0.1.

    The identity term is a global phase the product drops, so the exact
    operator is taken without it.
    """
    spec = HubbardSpec(2, 1, t=1.0, u=4.0, mu=2.0)
    ham = hubbard(spec)
    from majsim.hamiltonians import MajoranaHamiltonian
    core = MajoranaHamiltonian(ham.n_modes, ham.nonconstant_terms())
    exact_of = lambda dt: expm(1j * dt * majorana_hamiltonian_matrix(core))
    dts = [0.1, 0.05, 0.025]
    errors = [np.linalg.norm(exact_of(dt) - _product_step_matrix(ham, dt), 2)
              for dt in dts]
    slopes = np.diff(np.log(errors)) / np.diff(np.log(dts))
    for slope in slopes:
        assert abs(slope - 2.0) < 0.1


def test_trotter_circuit_matches_product_branchwise():
    """The compiled step equals the term-exponential product on fock."""
    n_modes = 4  # 2 system modes + 2 gadget ancilla modes
    ham = fermion_to_majorana(
        [FermionTerm((0,), (1,), 0.6), FermionTerm((1,), (0,), 0.6),
         FermionTerm((0,), (0,), -0.3)], n_modes)
    dt = 0.21
    circuit = trotter_step(ham, dt, ancilla=(4, 5, 6, 7))
    rng = np.random.default_rng(3)
    psi_sys = random_state(2, rng)
    full = np.zeros(2 ** n_modes, dtype=complex)
    full[:4] = psi_sys  # modes 2,3 empty
    init = FockState.from_amplitudes(full)
    expected_u = _product_step_matrix(ham, dt)
    for branch in enumerate_branches(circuit, "fock", state=init):
        expected = expected_u @ init.amplitudes
        overlap_direct = abs(np.vdot(expected, branch.state.amplitudes))
        flip = monomial_matrix(MajoranaMonomial.pair(5, 6, n_modes))
        overlap_flipped = abs(np.vdot(flip @ expected, branch.state.amplitudes))
        assert max(overlap_direct, overlap_flipped) > 1 - 1e-9


def test_trotter_empty_hamiltonian():
    from majsim.hamiltonians import MajoranaHamiltonian
    circuit = trotter_step(MajoranaHamiltonian(3, []), 0.1, (2, 3, 4, 5))
    assert circuit.instructions == []


def test_trotter_rejects_overlapping_ancilla():
    ham = fermion_to_majorana([FermionTerm((0,), (0,), 1.0)], 2)
    with pytest.raises(CircuitError):
        trotter_step(ham, 0.1, ancilla=(0, 1, 2, 3))


def test_trotter_step_preserves_norm_and_sector():
    spec = HubbardSpec(2, 1, t=1.0, u=2.0, mu=1.0)
    base = hubbard(spec)
    ham = type(base)(base.n_modes + 2, [
        (c, MajoranaMonomial(base.n_modes + 2, m.indices, phase_exp=m.phase_exp))
        for c, m in base.terms])
    circuit = trotter_step(ham, 0.15, ancilla=(8, 9, 10, 11))
    init = FockState.from_occupations([1, 0, 0, 1, 0, 0])
    rng = np.random.default_rng(11)
    from majsim.circuits import run
    result = run(circuit, "fock", rng, state=init, check_sector=True)
    assert result.state.norm() == pytest.approx(1.0, abs=1e-12)


# ----------------------------------------------------------------------
# UCC-2 ansatz
# ----------------------------------------------------------------------

def test_ucc2_zero_amplitudes_prepare_reference():
    circuit = ucc2_ansatz({}, {}, [1, 0, 1, 0], 4, ancilla=(8, 9, 10, 11))
    branches = enumerate_branches(circuit, "fock")
    assert len(branches) == 1
    target = FockState.from_occupations([1, 0, 1, 0])
    assert branches[0].state.fidelity(target) > 1 - 1e-10


def test_ucc2_single_excitation_matches_expm():
    """One t_p^r amplitude against dense exp(T - T^dag) on the reference."""
    amp = 0.4321
    n_modes = 5  # modes 0,1 active; mode 2 spectator (even parity); 3,4 ancilla
    reference = [1, 0, 1, 0, 0]
    from oracles import annihilation_matrix, creation_matrix
    t_dense = amp * creation_matrix(1, n_modes) @ annihilation_matrix(0, n_modes)
    generator = t_dense - t_dense.conj().T
    ref_state = FockState.from_occupations(reference)
    expected = expm(generator) @ ref_state.amplitudes

    circuit = ucc2_ansatz({(1, 0): amp}, {}, reference, n_modes,
                          ancilla=(6, 7, 8, 9), steps=64)
    flip = monomial_matrix(MajoranaMonomial.pair(7, 8, n_modes))
    from majsim.circuits import run
    for seed in range(4):  # sampled trajectories; every branch is exact
        result = run(circuit, "fock", np.random.default_rng(seed))
        fid = max(abs(np.vdot(expected, result.state.amplitudes)),
                  abs(np.vdot(flip @ expected, result.state.amplitudes)))
        assert fid > 1 - 1e-8


def test_ucc2_generator_is_hermitian_weight_2_and_4():
    gen = ucc2_generator({(0, 1): 0.3}, {(0, 1, 2, 3): 0.2}, 4)
    for coeff, mon in gen.terms:
        assert mon.is_hermitian()
        assert mon.weight in (2, 4)


def test_ucc2_variational_improvement_on_hubbard_dimer():
    """A coarse amplitude scan lowers the energy below the reference."""
    spec = HubbardSpec(2, 1, t=1.0, u=4.0, mu=0.0)
    base = hubbard(spec)
    n_modes = 6  # 4 system + 2 ancilla modes
    lifted = [(c, MajoranaMonomial(n_modes, m.indices, m.phase_exp))
              for c, m in base.terms]
    reference = [1, 0, 0, 1]  # half filling
    ref_state = FockState.from_occupations(reference + [0, 0])
    e_ref = expectation(ref_state, lifted)
    best = e_ref
    from majsim.circuits import run
    for amp in (-0.2, -0.1, 0.1, 0.2):
        # singles hop the up spin across sites; doubles exchange the pair
        circuit = ucc2_ansatz({(2, 0): amp}, {(1, 2, 0, 3): amp},
                              reference + [0, 0], n_modes,
                              ancilla=(8, 9, 10, 11), steps=8)
        result = run(circuit, "fock", np.random.default_rng(0))
        energy = expectation(result.state, lifted)
        best = min(best, energy)
    assert best < e_ref - 1e-3


def test_reference_prep_rejects_odd_parity():
    with pytest.raises(CircuitError):
        reference_prep_circuit([1, 0, 0], 3)


def test_ucc2_rejects_index_collisions():
    with pytest.raises(ValueError):
        ucc2_generator({(0, 0): 0.1}, {}, 2)
    with pytest.raises(ValueError):
        ucc2_generator({}, {(0, 0, 1, 2): 0.1}, 4)
