"""Labeled tensors: names, labels, permutation, element proxies, blocks.

Run with:  python demos/02_labeled_tensors.py
"""

from tnkit import UniTensor, storage

# Create a rank-3 tensor of ones and give the indices meaningful labels.
a = UniTensor.ones([8, 2, 8]).relabel(["v1", "phy", "v2"]).set_name("A")
a.print_diagram()

# Wrap an existing dense tensor; handles share elements, not metadata.
t = storage.arange(24).reshape(2, 3, 4)
u = UniTensor(t, labels=["a", "b", "c"]).set_name("uT")
print("labels:", u.labels, "shape:", u.shape)

p = u.permute(["b", "c", "a"])
print("permuted labels:", p.labels, "shape:", p.shape)
print("p shares elements with u:", p.same_data(u))

# Label-addressed element access is independent of the index order.
w = UniTensor.zeros([3, 3, 3]).relabel(["a", "b", "c"])
w.at(["a", "b", "c"], [0, 1, 2]).value = -1
w.at(["b", "a", "c"], [1, 0, 2]).value = -2
w.at(["c", "b", "a"], [2, 1, 0]).value = -3
print("\nafter three writes, element (a=0,b=1,c=2) =",
      w.at(["a", "b", "c"], [0, 1, 2]).value)

# relabel without the underscore returns a fresh handle over the same data.
w2 = w.relabel(old_label="c", new_label="k")
print("w2 shares data with w:", w2.same_data(w))
print("w keeps its labels:", w.labels, "; w2 has:", w2.labels)

# The rowrank controls how linear algebra reads the tensor as a matrix:
# the first `rowrank` indices form the row.
m = u.permute(["c", "a", "b"]).set_rowrank(1)
m.print_diagram()

# Blocks expose the raw dense payload; the underscore variant is a
# write-through reference.
g = UniTensor.ones([3, 3]).set_name("G")
blk = g.get_block_()
blk[0, 0] = 0.0
print("after editing the block reference, G[0,0] =", g.at([0, 0]).value)
