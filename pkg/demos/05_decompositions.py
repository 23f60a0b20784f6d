"""Matrix factorizations through the rowrank split, dense and block-sparse.

Run with:  python demos/05_decompositions.py
"""

import numpy as np

from tnkit import Bond, IN, OUT, Symmetry, UniTensor, contract, linalg, storage
from tnkit import random as trandom
from tnkit.linalg import LinOp, lanczos

# Prepare a rank-3 tensor as a 6x4 matrix: permute the wanted row index to
# the front and set rowrank.
m = UniTensor(storage.arange(24).reshape(2, 2, 6), labels=["a", "b", "c"])
m = m.permute(["c", "a", "b"]).set_rowrank(1).set_name("M")
m.print_diagram()

s, u, vdag = linalg.svd(m)
print("singular values:", np.diag(s.get_block_().view()))
rec = contract([u, s, vdag]).permute(m.labels)
print("|M - U S Vdag| =", (m - rec).norm())

# Truncated SVD keeps the largest values across the whole spectrum.
s_t, u_t, v_t, err = linalg.svd_truncate(m, keepdim=3, err=1e-10, return_err=1)
print("kept:", np.diag(s_t.get_block_().view()),
      " largest discarded:", err.get_block_().view()[0])

# Block-sparse input: every charge sector is decomposed independently and
# the truncation ranks values globally.
u1 = Symmetry.u1()
b12 = Bond(btype=IN, sectors=[(1, 2), (-1, 2)], syms=[u1])
b3 = Bond(btype=OUT, sectors=[(2, 2), (0, 4), (-2, 2)], syms=[u1])
t = UniTensor([b12, b12, b3], labels=["a", "b", "c"])
trandom.uniform_(t, low=-1.0, high=1.0, seed=4)
s_sym = linalg.svd(t, compute_uv=False)
print("\nsymmetric singular values per sector:")
for i in range(s_sym.nblocks):
    print("  ", np.diag(s_sym.get_block_(i).view()))
s4, _, _ = linalg.svd_truncate(t, keepdim=4)
print("keepdim=4 sector sizes:",
      [s4.get_block_(i).shape[0] for i in range(s4.nblocks)])
s4m, _, _ = linalg.svd_truncate(t, keepdim=4, min_blockdim=[1, 1, 1])
print("with min_blockdim=[1,1,1]:",
      [s4m.get_block_(i).shape[0] for i in range(s4m.nblocks)])

# Hermitian eigendecomposition and QR.
arr = np.random.default_rng(10).uniform(-1, 1, (4, 4))
h = UniTensor(storage.from_numpy(arr + arr.T), labels=["a", "b"], rowrank=1)
d, v = linalg.eigh(h)
print("\neigenvalues:", np.diag(d.get_block_().view()))

q, r = linalg.qr(UniTensor(storage.arange(20).reshape(5, 4),
                           labels=["a", "d"], rowrank=1))
qm = q.get_block_().numpy()
print("|Q^T Q - I| =", np.linalg.norm(qm.T @ qm - np.eye(4)))

# Matrix exponential; an anti-Hermitian exponent gives a unitary.
g = linalg.expm(h, a=-0.1j)
gm = g.get_block_().numpy()
print("|U^dag U - I| =", np.linalg.norm(gm.conj().T @ gm - np.eye(4)))

# The iterative ground-state solver works on any Hermitian linear map.
big = np.random.default_rng(0).standard_normal((200, 200))
big = big + big.T
vals, vecs = lanczos(LinOp(200, matvec=lambda v: big @ v), k=2, tol=1e-12)
print("\nlowest eigenvalues:", vals)
print("dense reference:   ", np.linalg.eigvalsh(big)[:2])
