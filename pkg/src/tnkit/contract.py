"""Label-driven tensor contraction.

``contract`` sums over every index label shared by its operands.  Directed
bonds contract only against the opposite direction, and quantum-number
bonds must agree sector by sector.  Multi-tensor calls either follow an
explicit parenthesized order string such as ``"((A,B),C)"`` or search for
a cost-optimal order with a dynamic program over tensor subsets.
"""

import itertools
import re

import numpy as np

from .bond import REGULAR
from .storage import DenseTensor
from .unitensor import UniTensor

_NAME_RE = re.compile(r"[A-Za-z0-9_*'+\-]+")


# -- contraction trees -------------------------------------------------------
#
# A tree is either a leaf (tensor name, str) or a pair (left, right).

def render_order(tree):
    if isinstance(tree, str):
        return tree
    return f"({render_order(tree[0])},{render_order(tree[1])})"


def parse_order(text):
    """Parse ``name | "(" order "," order ")"`` into a tree."""
    pos = 0

    def error(msg):
        raise ValueError(f"malformed order string {text!r} at {pos}: {msg}")

    def parse():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            error("unexpected end")
        if text[pos] == "(":
            pos += 1
            left = parse()
            skip_ws()
            if pos >= len(text) or text[pos] != ",":
                error("expected ','")
            pos += 1
            right = parse()
            skip_ws()
            if pos >= len(text) or text[pos] != ")":
                error("expected ')'")
            pos += 1
            return (left, right)
        m = _NAME_RE.match(text, pos)
        if not m:
            error("expected a tensor name")
        pos = m.end()
        return m.group()

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    tree = parse()
    skip_ws()
    if pos != len(text):
        error("trailing characters")
    return tree


def tree_leaves(tree):
    if isinstance(tree, str):
        return [tree]
    return tree_leaves(tree[0]) + tree_leaves(tree[1])


# -- pairwise contraction -----------------------------------------------------

def _check_pair_bond(label, ba, bb):
    if ba.dim != bb.dim:
        raise ValueError(f"label {label!r}: dimension mismatch "
                         f"({ba.dim} vs {bb.dim})")
    if (ba.btype == REGULAR) != (bb.btype == REGULAR):
        raise ValueError(f"label {label!r}: cannot contract a REGULAR bond "
                         f"with a directed bond")
    if ba.btype != REGULAR and ba.btype == bb.btype:
        raise ValueError(f"label {label!r}: only bonds with opposite "
                         f"directions can be contracted (both {ba.btype})")
    if ba.has_qnums or bb.has_qnums:
        if ba.syms != bb.syms or ba.sectors != bb.sectors:
            raise ValueError(f"label {label!r}: quantum-number sectors do "
                             f"not match")


def contract_pair(a, b):
    """Contract two tensors over all labels they share.

    The output carries a's free labels (in a's order) followed by b's; with
    no shared labels this is the outer product.  A fully contracted result
    is returned as a rank-0 tensor (read it with ``.item()``).
    """
    if not isinstance(a, UniTensor) or not isinstance(b, UniTensor):
        raise TypeError("contract expects UniTensors")
    if a.is_sym != b.is_sym:
        raise ValueError("cannot contract a block-sparse tensor with a dense "
                         "one; use convert_from first")
    a_labels, b_labels = a.labels, b.labels
    shared = [l for l in a_labels if l in b_labels]
    a_pos = [a_labels.index(l) for l in shared]
    b_pos = [b_labels.index(l) for l in shared]
    for l, pa, pb in zip(shared, a_pos, b_pos):
        _check_pair_bond(l, a.bonds[pa], b.bonds[pb])
    a_free = [i for i in range(a.rank) if a_labels[i] not in shared]
    b_free = [i for i in range(b.rank) if b_labels[i] not in shared]
    out_labels = [a_labels[i] for i in a_free] + [b_labels[i] for i in b_free]
    if len(set(out_labels)) != len(out_labels):
        raise ValueError(f"duplicate free labels in contraction result: "
                         f"{out_labels}")
    out_bonds = [a.bonds[i] for i in a_free] + [b.bonds[i] for i in b_free]

    if not a.is_sym:
        res = np.tensordot(a.get_block_().view(), b.get_block_().view(),
                           axes=(a_pos, b_pos))
        if res.ndim == 0:
            return UniTensor.scalar(res.item())
        return UniTensor._assemble(out_bonds, out_labels, len(a_free), "",
                                   [DenseTensor(np.ascontiguousarray(res))], None)
    return _contract_pair_blocks(a, b, shared, a_pos, b_pos, a_free, b_free,
                                 out_bonds, out_labels)


def _contract_pair_blocks(a, b, shared, a_pos, b_pos, a_free, b_free,
                          out_bonds, out_labels):
    dt = np.result_type(a.dtype, b.dtype)
    scalar_out = len(out_bonds) == 0
    if scalar_out:
        total = np.zeros((), dtype=dt)
        out = None
    else:
        out = UniTensor(out_bonds, labels=out_labels, dtype=dt,
                        rowrank=len(a_free))
    # Index b's blocks by their sector signature on the contracted bonds.
    b_by_key = {}
    for j in range(b.nblocks):
        qn = b.block_qn_indices(j)
        b_by_key.setdefault(tuple(qn[p] for p in b_pos), []).append(j)
    for i in range(a.nblocks):
        a_qn = a.block_qn_indices(i)
        key = tuple(a_qn[p] for p in a_pos)
        for j in b_by_key.get(key, ()):
            b_qn = b.block_qn_indices(j)
            res = np.tensordot(a.get_block_(i).view(), b.get_block_(j).view(),
                               axes=(a_pos, b_pos))
            if scalar_out:
                total += res
            else:
                out_qn = tuple([a_qn[p] for p in a_free]
                               + [b_qn[p] for p in b_free])
                out.get_block_(list(out_qn)).view()[...] += res
    if scalar_out:
        return UniTensor.scalar(total.item())
    return out


# -- multi-tensor contraction ---------------------------------------------------

def contract(first, *rest, order=None, optimal=True):
    """Contract two tensors, or a list of tensors.

    ``contract(a, b)`` contracts a pair.  ``contract([a, b, c, ...])``
    contracts a whole list: with ``order`` a parenthesized string over the
    tensor names, that order is followed; otherwise, with ``optimal=True``
    (the default) a minimal-cost order is computed for every call, and with
    ``optimal=False`` the tensors are folded left to right.  Three or more
    tensors with ``order`` or ``optimal`` require all names to be set and
    distinct.  A label may appear on at most two tensors.
    """
    if isinstance(first, UniTensor):
        tensors = [first, *rest]
    else:
        tensors = list(first)
        if rest:
            raise TypeError("pass either several tensors or one list")
    if len(tensors) == 0:
        raise ValueError("nothing to contract")
    if not all(isinstance(t, UniTensor) for t in tensors):
        raise TypeError("contract expects UniTensors")
    if len(tensors) == 1:
        return tensors[0].clone()
    _reject_hyperedges(tensors)
    if len(tensors) == 2:
        return contract_pair(tensors[0], tensors[1])
    if order is None and not optimal:
        acc = tensors[0]
        for t in tensors[1:]:
            acc = contract_pair(acc, t)
        return acc
    names = [t.name for t in tensors]
    if any(not n for n in names):
        raise ValueError("multi-tensor contraction with an order or the "
                         "optimal search needs every tensor named")
    if len(set(names)) != len(names):
        raise ValueError(f"tensor names must be distinct, got {names}")
    by_name = dict(zip(names, tensors))
    if order is not None:
        tree = parse_order(order) if isinstance(order, str) else order
        leaves = tree_leaves(tree)
        if sorted(leaves) != sorted(names):
            raise ValueError(f"order {render_order(tree)!r} does not cover "
                             f"exactly the tensors {names}")
    else:
        dims = _label_dims(tensors)
        tree = find_optimal_order({n: t.labels for n, t in by_name.items()}, dims)
    return execute_tree(tree, by_name)


def execute_tree(tree, by_name):
    if isinstance(tree, str):
        return by_name[tree]
    return contract_pair(execute_tree(tree[0], by_name),
                         execute_tree(tree[1], by_name))


def _reject_hyperedges(tensors):
    counts = {}
    for t in tensors:
        for l in t.labels:
            counts[l] = counts.get(l, 0) + 1
    bad = [l for l, c in counts.items() if c > 2]
    if bad:
        raise ValueError(f"labels {bad} appear on more than two tensors; "
                         f"hyper-edge contraction is not supported")


def _label_dims(tensors):
    dims = {}
    for t in tensors:
        for l, b in zip(t.labels, t.bonds):
            if l in dims and dims[l] != b.dim:
                raise ValueError(f"label {l!r} has inconsistent dimensions "
                                 f"({dims[l]} vs {b.dim})")
            dims[l] = b.dim
    return dims


# -- optimal order search ----------------------------------------------------------

def contraction_cost(tree, label_sets, dims):
    """Total scalar-multiplication cost of executing ``tree``."""

    def rec(node):
        if isinstance(node, str):
            return 0, dict.fromkeys(label_sets[node])
        c1, f1 = rec(node[0])
        c2, f2 = rec(node[1])
        union = {**f1, **f2}
        step = 1
        for l in union:
            step *= dims[l]
        free = {l: None for l in union if (l in f1) != (l in f2)}
        return c1 + c2 + step, free

    return rec(tree)[0]


def find_optimal_order(label_sets, dims):
    """Minimal-cost binary contraction tree for a set of named tensors.

    ``label_sets`` maps each tensor name to its label list; ``dims`` maps
    each label to its dimension.  The cost of one pairwise step is the
    product of the dimensions of the union of both operands' free labels
    (contracted labels counted once); the total cost is minimized by a
    dynamic program over subsets, with a cost cap that doubles until a
    complete tree is found.  Outer-product pairs are admitted too: they can
    be part of the optimum even in a connected network (contract two small
    dangling tensors first when the tensor joining them carries a huge
    extra index).  Ties are broken toward the lexicographically smallest
    rendered order string.
    """
    names = list(label_sets)
    n = len(names)
    if n == 0:
        raise ValueError("empty tensor network")
    if n == 1:
        return names[0]
    if n > 16:
        raise ValueError(f"order search over {n} tensors is not supported "
                         f"(limit 16)")
    label_lists = [list(label_sets[nm]) for nm in names]
    # Free labels of every subset: labels occurring exactly once inside it.
    free = [None] * (1 << n)
    for mask in range(1, 1 << n):
        counts = {}
        for i in range(n):
            if mask >> i & 1:
                for l in label_lists[i]:
                    counts[l] = counts.get(l, 0) + 1
        free[mask] = frozenset(l for l, c in counts.items() if c == 1)

    def pair_cost(m1, m2):
        cost = 1
        for l in free[m1] | free[m2]:
            cost *= dims[l]
        return cost

    full = (1 << n) - 1
    cap = max(1, min(pair_cost(1 << i, 1 << j)
                     for i in range(n) for j in range(i + 1, n)))
    while True:
        best = {}
        for i in range(n):
            best[1 << i] = (0, names[i], names[i])
        for mask in _masks_by_popcount(n):
            sub = (mask - 1) & mask
            while sub:
                rest = mask ^ sub
                if sub < rest:  # each split once
                    s1, s2 = sub, rest
                else:
                    s1, s2 = rest, sub
                sub = (sub - 1) & mask
                if s1 not in best or s2 not in best:
                    continue
                c1, _, r1 = best[s1]
                c2, _, r2 = best[s2]
                cost = c1 + c2 + pair_cost(s1, s2)
                if cost > cap:
                    continue
                if r1 <= r2:
                    tree, rendered = (best[s1][1], best[s2][1]), f"({r1},{r2})"
                else:
                    tree, rendered = (best[s2][1], best[s1][1]), f"({r2},{r1})"
                cur = best.get(mask)
                if cur is None or (cost, rendered) < (cur[0], cur[2]):
                    best[mask] = (cost, tree, rendered)
        if full in best:
            return best[full][1]
        cap *= 2


def _masks_by_popcount(n):
    order = sorted(range(1, 1 << n), key=lambda m: m.bit_count())
    return [m for m in order if m.bit_count() >= 2]


def brute_force_order(label_sets, dims):
    """Exhaustive minimum over all binary trees (test oracle; small n only)."""
    names = list(label_sets)

    def trees(items):
        if len(items) == 1:
            yield items[0]
            return
        for k in range(1, len(items)):
            for left_set in itertools.combinations(items, k):
                right_set = [x for x in items if x not in left_set]
                if right_set and items[0] in left_set:  # avoid mirror duplicates
                    for lt in trees(list(left_set)):
                        for rt in trees(right_set):
                            yield (lt, rt)

    best = None
    for tree in trees(names):
        cost = contraction_cost(tree, label_sets, dims)
        if best is None or cost < best[0]:
            best = (cost, tree)
    return best[1]
