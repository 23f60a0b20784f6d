"""Shared fixtures and independent oracles used across the test suite.

The oracles here deliberately avoid the library's own code paths: dense
Hamiltonians come from explicit Kronecker sums, contraction references
from naive index loops, circuit references from sparse full-space gate
matrices, and ground-state references from free-fermion single-particle
spectra or exact diagonalization.
"""

import itertools

import numpy as np
import pytest

from tnkit import Bond, IN, OUT, Symmetry, UniTensor
from tnkit import random as trandom


# -- contraction oracle ------------------------------------------------------

def loop_contract(a, a_labels, b, b_labels):
    """Naive elementwise-loop contraction of two numpy arrays by labels."""
    shared = [l for l in a_labels if l in b_labels]
    a_free = [l for l in a_labels if l not in shared]
    b_free = [l for l in b_labels if l not in shared]
    out_labels = a_free + b_free
    dims = {}
    for l, d in zip(a_labels, a.shape):
        dims[l] = d
    for l, d in zip(b_labels, b.shape):
        dims[l] = d
    out = np.zeros([dims[l] for l in out_labels],
                   dtype=np.result_type(a.dtype, b.dtype))
    for free_idx in itertools.product(*[range(dims[l]) for l in out_labels]):
        assign = dict(zip(out_labels, free_idx))
        total = 0
        for shared_idx in itertools.product(*[range(dims[l]) for l in shared]):
            assign.update(zip(shared, shared_idx))
            ai = tuple(assign[l] for l in a_labels)
            bi = tuple(assign[l] for l in b_labels)
            total += a[ai] * b[bi]
        out[free_idx] = total
    return out, out_labels


# -- symmetric-tensor helpers ---------------------------------------------------

def to_dense(ut):
    """Dense copy of a (possibly block-sparse) tensor, via convert_from."""
    if not ut.is_sym:
        return ut.clone()
    dense = UniTensor.zeros(list(ut.shape), labels=ut.labels,
                            rowrank=ut.rowrank, dtype=ut.dtype)
    dense.convert_from(ut)
    return dense


def random_u1_tensor(rng, rank=3, max_sectors=3, max_deg=3, directions=None):
    """A random U(1)-symmetric tensor with a guaranteed zero-flux block.

    Charges on the final bond are chosen so that at least one zero-flux
    combination exists.
    """
    u1 = Symmetry.u1()
    while True:
        bonds = []
        if directions is None:
            dirs = [IN if rng.random() < 0.5 else OUT for _ in range(rank)]
        else:
            dirs = list(directions)
        charge_pool = [-2, -1, 0, 1, 2]
        for i in range(rank - 1):
            nsec = rng.integers(1, max_sectors + 1)
            charges = rng.choice(charge_pool, size=nsec, replace=False)
            sectors = [(int(q), int(rng.integers(1, max_deg + 1)))
                       for q in charges]
            bonds.append(Bond(btype=dirs[i], sectors=sectors, syms=[u1]))
        # choose last-bond charges so flux can cancel
        reachable = {0}
        for b, d in zip(bonds, dirs):
            reachable = {r + (q[0] if d == IN else -q[0])
                         for r in reachable for q in b.qnums()}
        need = sorted(reachable)[:max_sectors]
        last = [(int(q) if dirs[-1] == OUT else -int(q),
                 int(rng.integers(1, max_deg + 1))) for q in need]
        # make charges unique (sign flip can collide only if duplicates)
        seen, sectors = set(), []
        for q, dg in last:
            if q not in seen:
                seen.add(q)
                sectors.append((q, dg))
        try:
            bonds.append(Bond(btype=dirs[-1], sectors=sectors, syms=[u1]))
            t = UniTensor(bonds, labels=[f"x{i}" for i in range(rank)])
        except ValueError:
            continue
        trandom.normal_(t, seed=int(rng.integers(0, 2**31)))
        return t


# -- physics oracles ---------------------------------------------------------------

_SP = np.array([[0.0, 1.0], [0.0, 0.0]])
_SM = _SP.T
_SZ2 = np.diag([0.5, -0.5])


def xx_dense_hamiltonian(n):
    """Kronecker-sum XX-chain Hamiltonian: sum (SxSx + SySy)."""
    h = np.zeros((2 ** n, 2 ** n))
    for j in range(n - 1):
        for a, b in ((_SP, _SM), (_SM, _SP)):
            term = np.eye(1)
            for k in range(n):
                op = a if k == j else (b if k == j + 1 else np.eye(2))
                term = np.kron(term, op)
            h += 0.5 * term
    return h


def free_fermion_ground_energy(n):
    """Sum of the negative eigenvalues of the half-hopping matrix."""
    t = np.diag(np.full(n - 1, 0.5), 1)
    t = t + t.T
    ev = np.linalg.eigvalsh(t)
    return float(ev[ev < 0].sum())


def circuit_reference(cfg):
    """Gate-by-gate evolution with full-space sparse gate matrices."""
    import scipy.linalg
    import scipy.sparse as sp

    n = cfg.n_sites
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    i2 = np.eye(2, dtype=complex)

    def h4(wl, wr):
        return (cfg.j * np.kron(sz, sz)
                + wl * cfg.hz * np.kron(sz, i2) + wr * cfg.hz * np.kron(i2, sz)
                + wl * cfg.hx * np.kron(sx, i2) + wr * cfg.hx * np.kron(i2, sx))

    gates = {}
    for b in range(n - 1):
        wl = 1.0 if b == 0 else 0.5
        wr = 1.0 if b == n - 2 else 0.5
        g4 = scipy.linalg.expm(-1j * cfg.dt * h4(wl, wr))
        gates[b] = sp.kron(sp.identity(2 ** b),
                           sp.kron(sp.csr_matrix(g4),
                                   sp.identity(2 ** (n - b - 2)))).tocsr()
    v = np.zeros(2 ** n, dtype=complex)
    v[int("".join("0" if c == "u" else "1" for c in cfg.pattern), 2)] = 1.0
    site = (n + 1) // 2 - 1

    def measure(w):
        w = w.reshape(2 ** site, 2, -1)
        return float(np.sum(np.abs(w[:, 0, :]) ** 2)
                     - np.sum(np.abs(w[:, 1, :]) ** 2))

    out = [measure(v)]
    for _ in range(cfg.steps):
        for b in range(0, n - 1, 2):
            v = gates[b] @ v
        for b in range(1, n - 1, 2):
            v = gates[b] @ v
        out.append(measure(v))
    return np.array(out)


# -- fixtures ---------------------------------------------------------------------

@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def u1():
    return Symmetry.u1()


@pytest.fixture
def sym_rank3(u1):
    """The U(1) rank-3 tensor with bonds IN(+1,-1), IN(+1,-1), OUT(+2,0,-2)."""
    b1 = Bond(btype=IN, sectors=[(1, 1), (-1, 1)], syms=[u1])
    b2 = Bond(btype=IN, sectors=[(1, 1), (-1, 1)], syms=[u1])
    b3 = Bond(btype=OUT, sectors=[(2, 1), (0, 2), (-2, 1)], syms=[u1])
    return UniTensor([b1, b2, b3], labels=["a", "b", "c"], name="uTsym")
