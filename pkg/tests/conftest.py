
import numpy as np
import pytest


def full_space_sector_hamiltonian(n, omega, hopping):
    """Two-photon block of the chain Hamiltonian built from truncated ladder matrices.

    Independent of cavitywalk.fock: the operators are Kronecker products of
    3-level annihilation matrices, and the sector is read off by projecting on
    occupation-number vectors.
    """
    cutoff = 3
    a1 = np.diag(np.sqrt(np.arange(1, cutoff)), 1)
    eye = np.eye(cutoff)

    def op(j):
        mats = [a1 if k == j else eye for k in range(n)]
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    a = [op(j) for j in range(n)]
    h = sum(omega * x.T @ x for x in a)
    for j in range(n - 1):
        h = h + hopping * (a[j].T @ a[j + 1] + a[j + 1].T @ a[j])

    vectors = []
    for m, k in ((m, k) for m in range(n) for k in range(m, n)):
        occ = [0] * n
        occ[m] += 1
        occ[k] += 1
        idx = 0
        for o in occ:
            idx = idx * cutoff + o
        v = np.zeros(cutoff**n)
        v[idx] = 1.0
        vectors.append(v)
    b = np.array(vectors).T
    return b.T @ h @ b


@pytest.fixture
def full_space_h():
    return full_space_sector_hamiltonian


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[key])
