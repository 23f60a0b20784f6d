"""Block-sparse tensors with U(1) charges: bonds, blocks, conversion.

Run with:  python demos/03_symmetric_tensors.py
"""

import numpy as np

from tnkit import Bond, IN, OUT, Symmetry, UniTensor, contract
from tnkit import random as trandom

u1 = Symmetry.u1()
print("symmetry:", u1, "| combine(2,3) =", u1.combine(2, 3),
      "| reverse(2) =", u1.reverse(2))

# A directed bond lists its charge sectors with degeneracies.
bond = Bond(btype=IN, sectors=[(2, 3), (4, 5)], syms=[u1])
print("\n", bond, sep="")

# Combining two bonds multiplies the spaces and groups equal charges.
b1 = Bond(btype=IN, sectors=[(0, 1), (1, 1)], syms=[u1])
b2 = Bond(btype=IN, sectors=[(2, 1), (3, 1)], syms=[u1])
print("\ncombined:\n", b1.combine(b2), sep="")

# A tensor on charged bonds stores only the zero-flux blocks: the charges
# flowing in must cancel the charges flowing out.
bi = Bond(btype=IN, sectors=[(1, 1), (-1, 1)], syms=[u1])
bo = Bond(btype=OUT, sectors=[(2, 1), (0, 2), (-2, 1)], syms=[u1])
t = UniTensor([bi, bi, bo], labels=["a", "b", "c"]).set_name("uTsym")
t.print_diagram()
print("valid blocks:", t.nblocks)
for i in range(t.nblocks):
    print(f"  block #{i}: Qn indices {t.block_qn_indices(i)}, "
          f"charges {t.block_qnums(i)}, shape {t.get_block_(i).shape}")

# Elements outside every valid block do not exist.
print("\nat (0,0,0) exists:", t.at([0, 0, 0]).exists())
print("at (0,0,1) exists:", t.at([0, 0, 1]).exists())

# Scaling is fine; shifting would break the block structure and is refused.
trandom.normal_(t, seed=1)
scaled = t * 2 / 2
print("norm preserved under *2/2:", abs((scaled - t).norm()) < 1e-14)
try:
    t + 1.0
except ValueError as e:
    print("t + 1.0 raises:", str(e).splitlines()[0][:60], "...")

# Conversion between dense and block-sparse is exact on symmetric data.
dense = UniTensor.zeros(list(t.shape), labels=t.labels)
dense.convert_from(t)
back = UniTensor(t.bonds, labels=t.labels)
back.convert_from(dense)
print("dense -> symmetric -> dense is the identity:",
      (back - t).norm() == 0.0)

# Charge-changing operators get a dimension-1 charged bond so that every
# tensor stays zero-flux; pairs of raising/lowering operators contract it.
bqo = Bond(btype=OUT, sectors=[(2, 1)], syms=[u1])
raise_op = UniTensor([bi, bi.redirect(), bqo], labels=["i", "j", "q"])
raise_op.at([0, 1, 0]).value = 1.0
lower_op = UniTensor([bqo.redirect(), bi, bi.redirect()],
                     labels=["q", "k", "l"])
lower_op.at([0, 1, 0]).value = 1.0
pair = contract(raise_op, lower_op)
print("\nraise x lower contracted over the charged bond:",
      pair.labels, pair.shape)
