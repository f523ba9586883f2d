"""Independent dense-matrix oracles used by the test suite.

Everything here is built from explicit 2x2 matrices and Kronecker products,
deliberately sharing no code with the package's bit-twiddling backends.
Mode 0 is the least significant tensor factor throughout, matching the
package convention.
"""

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # annihilation on one mode


def kron_all(ops):
    """Tensor product with mode 0 as the least significant factor."""
    out = np.array([[1.0 + 0.0j]])
    for op in ops:  # ops listed mode 0 first
        out = np.kron(op, out)
    return out


def gamma_matrix(p, n_modes):
    """Dense matrix of gamma_p on n_modes modes.

    gamma_{2k} = Z^(k) X_k,  gamma_{2k+1} = -Z^(k) Y_k, with Z strings on
    all modes below k.
    """
    k = p // 2
    ops = [Z] * k + [X if p % 2 == 0 else -Y] + [I2] * (n_modes - k - 1)
    return kron_all(ops)


def monomial_matrix(mon):
    """Dense matrix of a MajoranaMonomial (phase included)."""
    dim = 2 ** mon.n_modes
    out = np.eye(dim, dtype=complex) * mon.phase
    for p in mon.indices:
        out = out @ gamma_matrix(p, mon.n_modes)
    return out


def annihilation_matrix(k, n_modes):
    """Dense matrix of f_k with the Jordan-Wigner string on lower modes."""
    ops = [Z] * k + [LOWER] + [I2] * (n_modes - k - 1)
    return kron_all(ops)


def creation_matrix(k, n_modes):
    return annihilation_matrix(k, n_modes).conj().T


def fermion_term_matrix(term, n_modes):
    """Dense matrix of coeff * f^dag_{c0} f^dag_{c1} ... f_{a0} f_{a1} ..."""
    dim = 2 ** n_modes
    out = np.eye(dim, dtype=complex) * term.coefficient
    for c in term.creation:
        out = out @ creation_matrix(c, n_modes)
    for a in term.annihilation:
        out = out @ annihilation_matrix(a, n_modes)
    return out


def fermion_hamiltonian_matrix(terms, n_modes):
    dim = 2 ** n_modes
    out = np.zeros((dim, dim), dtype=complex)
    for term in terms:
        out += fermion_term_matrix(term, n_modes)
    return out


def majorana_hamiltonian_matrix(hamiltonian):
    dim = 2 ** hamiltonian.n_modes
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, mon in hamiltonian.terms:
        out += coeff * monomial_matrix(mon)
    return out


def rotation_matrix(pairs, theta, n_modes):
    """Dense expm oracle for exp(i theta prod_k i gamma_a gamma_b)."""
    dim = 2 ** n_modes
    gen = np.eye(dim, dtype=complex)
    for a, b in pairs:
        gen = gen @ (1j * gamma_matrix(a, n_modes) @ gamma_matrix(b, n_modes))
    return expm(1j * theta * gen)


def random_state(n_modes, rng):
    dim = 2 ** n_modes
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def random_even_state(n_modes, rng):
    """Haar-ish random state supported on the even-parity sector."""
    dim = 2 ** n_modes
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    for idx in range(dim):
        if bin(idx).count("1") % 2:
            vec[idx] = 0.0
    return vec / np.linalg.norm(vec)


def binomial_3sigma(p, shots):
    """Half-width of the 3-sigma band for a frequency estimate."""
    return 3.0 * np.sqrt(max(p * (1.0 - p), 1e-12) / shots)
