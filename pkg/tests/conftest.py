"""Independent oracles shared by the test modules.

Everything here is written against numpy.linalg and Kronecker products,
never against the package's own Jacobi solver or index arithmetic.
"""

import numpy as np
import pytest

I2 = np.eye(2)
X = np.array([[0.0, 1.0], [1.0, 0.0]])
Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def kron3(a, b, c):
    return np.kron(np.kron(a, b), c)


def oracle_hamiltonian(j, h=1.0, eta=1.0, omega=1.0):
    return j * (
        kron3(X, X, I2) + omega * kron3(I2, X, X) + eta * kron3(X, I2, X)
    ) + h * (kron3(Z, I2, I2) + kron3(I2, Z, I2) + kron3(I2, I2, Z))


def oracle_ground(j, h=1.0, eta=1.0, omega=1.0):
    w, v = np.linalg.eigh(oracle_hamiltonian(j, h, eta, omega))
    return w, v[:, 0]


def oracle_ptranspose(rho, n, k):
    """Partial transpose on qubit ``k`` (0 = leftmost) of an n-qubit matrix."""
    t = rho.reshape((2,) * (2 * n))
    t = np.swapaxes(t, k, n + k)
    return t.reshape(2**n, 2**n)


def oracle_ptrace(rho, n, keep):
    """Reduced matrix on the qubit positions ``keep`` via einsum."""
    t = rho.reshape((2,) * (2 * n))
    letters = "abcdefgh"
    ket = list(letters[:n])
    bra = list(letters[n : 2 * n])
    for q in range(n):
        if q not in keep:
            bra[q] = ket[q]
    out = "".join(ket[q] for q in keep) + "".join(bra[q] for q in keep)
    m = np.einsum("".join(ket) + "".join(bra) + "->" + out, t)
    d = 2 ** len(keep)
    return m.reshape(d, d)


def oracle_negativity(rho, n, k):
    ev = np.linalg.eigvalsh(oracle_ptranspose(rho, n, k))
    return float(np.abs(ev).sum() - 1.0)


def oracle_t3(rho, central=1):
    """T3 with the central qubit given as a position (A=0, B=1, C=2)."""
    others = [q for q in range(3) if q != central]
    n_c = oracle_negativity(rho, 3, central)
    pairs = []
    for o in others:
        keep = sorted([central, o])
        red = oracle_ptrace(rho, 3, keep)
        pairs.append(oracle_negativity(red, 2, keep.index(central)))
    return float(np.sqrt(max(0.0, n_c**2 - pairs[0] ** 2 - pairs[1] ** 2)))


def oracle_gibbs(j, T, h=1.0, eta=1.0, omega=1.0):
    w, v = np.linalg.eigh(oracle_hamiltonian(j, h, eta, omega))
    p = np.exp(-(w - w[0]) / T)
    p /= p.sum()
    return (v * p) @ v.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
