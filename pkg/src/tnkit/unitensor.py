"""Labeled tensors, dense or block-sparse under abelian symmetries.

A :class:`UniTensor` bundles a name, per-index string labels, the
:class:`~tnkit.bond.Bond` list, a ``rowrank`` (how many leading indices
form the row side when the tensor is read as a matrix), and the payload.
For bonds without quantum numbers the payload is a single dense block; for
quantum-number bonds it is the list of all blocks whose total charge flux
vanishes: incoming bonds contribute their sector charge, outgoing bonds
the reversed charge, and only zero-flux index combinations can be nonzero.

Handles follow reference semantics: metadata-only operations (``relabel``,
``permute``, ``set_rowrank``, ``transpose``) return a new handle that
shares element storage with the original; use :meth:`UniTensor.clone` for
an independent copy.
"""

import itertools

import numpy as np

from . import storage
from .bond import Bond, BondType, IN, OUT, REGULAR
from .storage import DenseTensor, Float64, check_dtype, dtype_name
from .symmetry import combine_qnums, identity_qnum, reverse_qnums


def _default_labels(rank):
    return [str(i) for i in range(rank)]


def _zero_flux_combos(bonds):
    """All sector-index tuples with vanishing flux, in row-major order."""
    syms = bonds[0].syms
    ident = identity_qnum(syms)
    combos = []
    for combo in itertools.product(*[range(b.nsectors) for b in bonds]):
        flux = ident
        for b, k in zip(bonds, combo):
            q = b.sectors[k][0]
            if b.btype == OUT:
                q = reverse_qnums(q, syms)
            flux = combine_qnums(flux, q, syms)
        if flux == ident:
            combos.append(combo)
    return combos


class UniTensor:
    """A named tensor with labeled bonds and dense or block-sparse payload.

    Create a zero-initialized tensor from bonds::

        ut = UniTensor([Bond(2), Bond(3)], labels=["a", "b"])

    or wrap an existing :class:`DenseTensor`::

        ut = UniTensor(storage.arange(6).reshape(2, 3), labels=["a", "b"])

    If every bond carries quantum numbers (all directed, same symmetries),
    the tensor is block-sparse and stores one dense block per zero-flux
    sector combination, enumerated row-major over the per-bond Qn indices
    with the first bond outermost.
    """

    __slots__ = ("_name", "_labels", "_bonds", "_rowrank", "_blocks", "_qns",
                 "_lookup")

    def __init__(self, bonds, labels=None, name="", dtype=Float64, rowrank=None):
        if isinstance(bonds, DenseTensor):
            self._init_wrap(bonds, labels, name, rowrank)
            return
        bonds = list(bonds)
        if len(bonds) == 0:
            raise ValueError("a UniTensor needs at least one bond")
        if not all(isinstance(b, Bond) for b in bonds):
            raise TypeError("bonds must be Bond instances")
        labels = _default_labels(len(bonds)) if labels is None else list(labels)
        _check_labels(labels, len(bonds))
        n_q = sum(1 for b in bonds if b.has_qnums)
        if n_q == 0:
            dt = check_dtype(dtype)
            block = DenseTensor(np.zeros([b.dim for b in bonds], dtype=dt))
            qns = None
            blocks = [block]
        elif n_q == len(bonds):
            syms = bonds[0].syms
            for b in bonds:
                if b.syms != syms:
                    raise ValueError("all bonds must carry the same symmetries")
            dt = check_dtype(dtype)
            qns = _zero_flux_combos(bonds)
            if not qns:
                raise ValueError(
                    "no valid blocks: no combination of these bonds' sectors "
                    "has zero flux")
            blocks = [
                DenseTensor(np.zeros([b.sectors[k][1] for b, k in zip(bonds, qn)],
                                     dtype=dt))
                for qn in qns
            ]
        else:
            raise ValueError(
                "cannot mix quantum-number bonds with plain bonds in one tensor")
        if rowrank is None:
            rowrank = (len(bonds) + 1) // 2
        _check_rowrank(rowrank, len(bonds))
        self._name = str(name)
        self._labels = labels
        self._bonds = bonds
        self._rowrank = int(rowrank)
        self._blocks = blocks
        self._qns = qns
        self._lookup = None if qns is None else {q: i for i, q in enumerate(qns)}

    def _init_wrap(self, tensor, labels, name, rowrank):
        rank = tensor.rank
        if rank == 0:
            raise ValueError("cannot wrap a rank-0 tensor; use a scalar")
        labels = _default_labels(rank) if labels is None else list(labels)
        _check_labels(labels, rank)
        if rowrank is None:
            rowrank = rank // 2
        _check_rowrank(rowrank, rank)
        self._name = str(name)
        self._labels = labels
        self._bonds = [Bond(d) for d in tensor.shape]
        self._rowrank = int(rowrank)
        self._blocks = [tensor]
        self._qns = None
        self._lookup = None

    @classmethod
    def _assemble(cls, bonds, labels, rowrank, name, blocks, qns):
        """Internal constructor that skips validation (rank 0 allowed)."""
        ut = cls.__new__(cls)
        ut._name = name
        ut._labels = list(labels)
        ut._bonds = list(bonds)
        ut._rowrank = rowrank
        ut._blocks = list(blocks)
        ut._qns = None if qns is None else list(qns)
        ut._lookup = None if qns is None else {q: i for i, q in enumerate(ut._qns)}
        return ut

    @classmethod
    def scalar(cls, value, dtype=None):
        """A rank-0 tensor holding one value (as returned by contractions)."""
        if dtype is None:
            dtype = storage.Complex128 if isinstance(value, complex) else Float64
        block = DenseTensor(np.array(value, dtype=check_dtype(dtype)))
        return cls._assemble([], [], 0, "", [block], None)

    # -- generators --------------------------------------------------------

    @classmethod
    def zeros(cls, shape, labels=None, name="", dtype=Float64, rowrank=None):
        if _is_bond_list(shape):
            return cls(shape, labels, name, dtype, rowrank)
        return cls(storage.zeros(shape, dtype), labels, name, rowrank=rowrank)

    @classmethod
    def ones(cls, shape, labels=None, name="", dtype=Float64, rowrank=None):
        return cls(storage.ones(shape, dtype), labels, name, rowrank=rowrank)

    @classmethod
    def eye(cls, d, labels=None, name="", dtype=Float64):
        return cls(storage.eye(d, dtype), labels, name, rowrank=1)

    @classmethod
    def arange(cls, n, labels=None, name="", dtype=Float64):
        return cls(storage.arange(n, dtype), labels, name, rowrank=0)

    @classmethod
    def uniform(cls, shape, low=0.0, high=1.0, labels=None, name="",
                dtype=Float64, rowrank=None, seed=None):
        return cls(storage.uniform(shape, low, high, dtype, seed), labels,
                   name, rowrank=rowrank)

    @classmethod
    def normal(cls, shape, mean=0.0, std=1.0, labels=None, name="",
               dtype=Float64, rowrank=None, seed=None):
        return cls(storage.normal(shape, mean, std, dtype, seed), labels,
                   name, rowrank=rowrank)

    # -- metadata ------------------------------------------------------------

    @property
    def name(self):
        return self._name

    @property
    def labels(self):
        return list(self._labels)

    @property
    def bonds(self):
        return list(self._bonds)

    @property
    def rank(self):
        return len(self._bonds)

    @property
    def shape(self):
        return tuple(b.dim for b in self._bonds)

    @property
    def rowrank(self):
        return self._rowrank

    @property
    def dtype(self):
        return self._blocks[0].dtype

    @property
    def is_sym(self):
        return self._qns is not None

    @property
    def is_contiguous(self):
        return all(b.is_contiguous for b in self._blocks)

    @property
    def braket_form(self):
        """True when directed and every IN bond precedes every OUT bond."""
        types = [b.btype for b in self._bonds]
        if REGULAR in types:
            return False
        first_out = next((i for i, t in enumerate(types) if t == OUT), len(types))
        return all(t == OUT for t in types[first_out:])

    @property
    def nblocks(self):
        return len(self._blocks)

    def bond(self, label):
        return self._bonds[self._label_pos(label)]

    def set_name(self, name):
        """Set the tensor name; mutates and returns self (chainable)."""
        self._name = str(name)
        return self

    def _label_pos(self, label):
        try:
            return self._labels.index(label)
        except ValueError:
            raise ValueError(f"no bond labeled {label!r}; labels are "
                             f"{self._labels}") from None

    def _meta_view(self):
        """A handle with fresh metadata sharing all element storage."""
        return UniTensor._assemble(self._bonds, self._labels, self._rowrank,
                                   self._name, self._blocks, self._qns)

    # -- relabel / permute / rowrank ------------------------------------------

    def relabel(self, arg1=None, arg2=None, *, old_label=None, new_label=None):
        """Return a tensor with changed labels, sharing element storage.

        Three forms::

            t.relabel(["i", "j", "k"])        # full replacement
            t.relabel(["a", "b"], ["i", "j"]) # several old -> new
            t.relabel(old_label="a", new_label="i")
        """
        out = self._meta_view()
        return out.relabel_(arg1, arg2, old_label=old_label, new_label=new_label)

    def relabel_(self, arg1=None, arg2=None, *, old_label=None, new_label=None):
        """In-place variant of :meth:`relabel`; returns self."""
        if old_label is not None or new_label is not None:
            if arg1 is not None or arg2 is not None:
                raise TypeError("pass either positional lists or old/new keywords")
            olds, news = [old_label], [new_label]
        elif arg2 is not None:
            olds = [arg1] if isinstance(arg1, str) else list(arg1)
            news = [arg2] if isinstance(arg2, str) else list(arg2)
        else:
            news = list(arg1)
            if len(news) != self.rank:
                raise ValueError(f"need {self.rank} labels, got {len(news)}")
            _check_labels(news, self.rank)
            self._labels = news
            return self
        if len(olds) != len(news):
            raise ValueError("old and new label lists differ in length")
        labels = list(self._labels)
        for old, new in zip(olds, news):
            labels[self._label_pos(old)] = new
        _check_labels(labels, self.rank)
        self._labels = labels
        return self

    def _resolve_order(self, order):
        order = list(order)
        if len(order) != self.rank:
            raise ValueError(f"permutation must list all {self.rank} indices")
        if all(isinstance(o, str) for o in order):
            pos = [self._label_pos(o) for o in order]
        else:
            pos = [int(o) for o in order]
        if sorted(pos) != list(range(self.rank)):
            raise ValueError(f"invalid permutation {order}")
        return pos

    def permute(self, order):
        """Reorder indices (by labels or positions) without moving elements."""
        pos = self._resolve_order(order)
        labels = [self._labels[p] for p in pos]
        bonds = [self._bonds[p] for p in pos]
        blocks = [blk.permute(pos) for blk in self._blocks]
        qns = None if self._qns is None else [
            tuple(qn[p] for p in pos) for qn in self._qns]
        return UniTensor._assemble(bonds, labels, self._rowrank, self._name,
                                   blocks, qns)

    def permute_(self, order):
        out = self.permute(order)
        self._labels = out._labels
        self._bonds = out._bonds
        self._blocks = out._blocks
        self._qns = out._qns
        self._lookup = out._lookup
        return self

    def set_rowrank(self, r):
        _check_rowrank(r, self.rank)
        out = self._meta_view()
        out._rowrank = int(r)
        return out

    def set_rowrank_(self, r):
        _check_rowrank(r, self.rank)
        self._rowrank = int(r)
        return self

    # -- element access ---------------------------------------------------------

    def at(self, arg1, arg2=None):
        """Proxy addressing one element, by indices or labels + indices.

        ``t.at([i, j, k])`` uses the internal index order;
        ``t.at(["b", "a", "c"], [j, i, k])`` addresses by labels, so the
        internal order is irrelevant.  For symmetric tensors the proxy's
        ``exists()`` tells whether the element lies in a valid block.
        """
        if arg2 is None:
            labels, idx = self._labels, list(arg1)
        else:
            labels, idx = list(arg1), list(arg2)
        if len(labels) != self.rank or len(idx) != self.rank:
            raise ValueError(f"need one label and one index per bond "
                             f"(rank {self.rank})")
        if sorted(labels) != sorted(self._labels):
            raise ValueError(f"labels {labels} are not a permutation of "
                             f"{self._labels}")
        internal = [0] * self.rank
        for lbl, i in zip(labels, idx):
            internal[self._label_pos(lbl)] = int(i)
        for i, b in zip(internal, self._bonds):
            if not 0 <= i < b.dim:
                raise IndexError(f"index {i} out of bounds for bond of dim {b.dim}")
        if not self.is_sym:
            return ElementProxy(self, 0, tuple(internal))
        sector = []
        offset = []
        for i, b in zip(internal, self._bonds):
            s, o = b.locate(i)
            sector.append(s)
            offset.append(o)
        pos = self._lookup.get(tuple(sector))
        return ElementProxy(self, pos, tuple(offset))

    def __getitem__(self, key):
        if self.is_sym:
            raise ValueError("symmetric tensors are indexed with at() or "
                             "get_block(); slicing is for dense tensors")
        return self._blocks[0][key]

    def __setitem__(self, key, value):
        if self.is_sym:
            raise ValueError("symmetric tensors are written with at() or "
                             "put_block(); slicing is for dense tensors")
        if isinstance(value, UniTensor):
            value = value.get_block_()
        self._blocks[0][key] = value

    def item(self):
        """The value of a single-element tensor."""
        total = sum(b.size for b in self._blocks)
        if total != 1:
            raise ValueError(f"item() needs a single-element tensor, got {total}")
        return self._blocks[0].item()

    # -- blocks -------------------------------------------------------------------

    def _block_pos(self, args):
        if not self.is_sym:
            if len(args) == 0 or args == (0,):
                return 0
            raise ValueError("a non-symmetric tensor has exactly one block; "
                             "address it without arguments")
        if len(args) == 0:
            raise ValueError("a symmetric tensor has several blocks; address "
                             "one by index, Qn indices, or labels + Qn indices")
        if len(args) == 1 and isinstance(args[0], (int, np.integer)):
            i = int(args[0])
            if not 0 <= i < len(self._blocks):
                raise ValueError(f"block index {i} out of range "
                                 f"(0..{len(self._blocks) - 1})")
            return i
        if len(args) == 1:
            qn = tuple(int(x) for x in args[0])
        elif len(args) == 2:
            labels, raw = list(args[0]), list(args[1])
            if sorted(labels) != sorted(self._labels):
                raise ValueError(f"labels {labels} are not a permutation of "
                                 f"{self._labels}")
            qn = [0] * self.rank
            for lbl, k in zip(labels, raw):
                qn[self._label_pos(lbl)] = int(k)
            qn = tuple(qn)
        else:
            raise TypeError("address a block by index, Qn indices, or "
                            "labels + Qn indices")
        if len(qn) != self.rank:
            raise ValueError(f"need one Qn index per bond (rank {self.rank})")
        pos = self._lookup.get(qn)
        if pos is None:
            raise ValueError(f"no valid block at Qn indices {qn}")
        return pos

    def get_block_(self, *args):
        """The addressed block as a reference (edits write through)."""
        return self._blocks[self._block_pos(args)]

    def get_block(self, *args):
        """The addressed block as an independent copy."""
        return self._blocks[self._block_pos(args)].clone()

    def get_blocks_(self):
        """All blocks, by ascending block index, as references."""
        return list(self._blocks)

    def get_blocks(self):
        return [b.clone() for b in self._blocks]

    def put_block(self, tensor, *args):
        """Copy a tensor's values into the addressed block."""
        pos = self._block_pos(args)
        if tensor.shape != self._blocks[pos].shape:
            raise ValueError(f"block shape mismatch: {tensor.shape} vs "
                             f"{self._blocks[pos].shape}")
        self._blocks[pos].view()[...] = tensor.view()
        return self

    def put_block_(self, tensor, *args):
        """Install a tensor as the addressed block (shares storage with it)."""
        pos = self._block_pos(args)
        if tensor.shape != self._blocks[pos].shape:
            raise ValueError(f"block shape mismatch: {tensor.shape} vs "
                             f"{self._blocks[pos].shape}")
        if tensor.dtype != self.dtype:
            raise TypeError(f"block dtype {dtype_name(tensor.dtype)} differs "
                            f"from tensor dtype {dtype_name(self.dtype)}")
        self._blocks[pos] = tensor
        return self

    def block_qn_indices(self, i):
        """The Qn-index tuple of block ``i`` (symmetric tensors only)."""
        if not self.is_sym:
            raise ValueError("dense tensors have no Qn indices")
        return self._qns[i]

    def block_qnums(self, i):
        """The per-bond quantum numbers of block ``i``."""
        qn = self.block_qn_indices(i)
        return tuple(b.sectors[k][0] for b, k in zip(self._bonds, qn))

    # -- structure ops -----------------------------------------------------------

    def transpose(self):
        """Flip the direction of every directed bond (elements untouched)."""
        bonds = [b.redirect() for b in self._bonds]
        return UniTensor._assemble(bonds, self._labels, self._rowrank,
                                   self._name, self._blocks, self._qns)

    def transpose_(self):
        self._bonds = [b.redirect() for b in self._bonds]
        return self

    def conj(self):
        """Complex-conjugate all elements (identity for real dtypes)."""
        out = self._meta_view()
        out._blocks = [b.conj() for b in self._blocks]
        return out

    def conj_(self):
        for b in self._blocks:
            b.conj_()
        return self

    def dagger(self):
        """Hermitian conjugate: conjugate elements, flip all directions."""
        return self.conj().transpose_()

    def dagger_(self):
        return self.conj_().transpose_()

    # -- conversion ---------------------------------------------------------------

    def convert_from(self, src, force=False):
        """Copy elements from ``src``, converting between dense and symmetric.

        Dense -> symmetric copies only the addresses allowed by this
        tensor's block structure.  Nonzero source elements outside those
        addresses raise an error unless ``force=True``, in which case they
        are dropped.  Symmetric -> dense writes the valid blocks and zeros
        elsewhere.
        """
        if not isinstance(src, UniTensor):
            raise TypeError("convert_from expects a UniTensor")
        if src.rank != self.rank or src.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {src.shape}")
        if self.is_sym and not src.is_sym:
            src_view = src._blocks[0].view()
            covered = np.zeros(src.shape, dtype=bool)
            for qn, blk in zip(self._qns, self._blocks):
                sl = tuple(
                    slice(b.sector_offsets()[k], b.sector_offsets()[k] + b.sectors[k][1])
                    for b, k in zip(self._bonds, qn))
                blk.view()[...] = src_view[sl]
                covered[sl] = True
            if not force and np.any(src_view[~covered] != 0):
                raise ValueError(
                    "source has nonzero elements in symmetry-violating "
                    "positions; pass force=True to drop them")
        elif not self.is_sym and src.is_sym:
            view = self._blocks[0].view()
            view[...] = 0
            for qn, blk in zip(src._qns, src._blocks):
                sl = tuple(
                    slice(b.sector_offsets()[k], b.sector_offsets()[k] + b.sectors[k][1])
                    for b, k in zip(src._bonds, qn))
                view[sl] = blk.view()
        elif self.is_sym and src.is_sym:
            if [b for b in self._bonds] != [b for b in src._bonds]:
                raise ValueError("symmetric tensors have different bond structure")
            for qn, blk in zip(self._qns, self._blocks):
                blk.view()[...] = src._blocks[src._lookup[qn]].view()
        else:
            self._blocks[0].view()[...] = src._blocks[0].view()
        return self

    # -- arithmetic -----------------------------------------------------------------

    def _binary(self, other, op, symbol):
        if isinstance(other, (int, float, complex, bool, np.generic)):
            if self.is_sym and symbol in "+-":
                raise ValueError(
                    f"cannot perform elementwise '{symbol}' between a scalar "
                    f"and a block-sparse tensor: it would destroy the block "
                    f"structure; operate on the blocks instead")
            out = self._meta_view()
            out._name = ""
            out._blocks = [DenseTensor(np.asarray(op(b.view(), other)))
                           for b in self._blocks]
            return out
        if not isinstance(other, UniTensor):
            return NotImplemented
        if self.is_sym != other.is_sym:
            raise ValueError("cannot mix dense and symmetric tensors in "
                             "elementwise arithmetic; use convert_from first")
        if self._labels != other._labels:
            if sorted(self._labels) != sorted(other._labels):
                raise ValueError(f"label sets differ: {self._labels} vs "
                                 f"{other._labels}")
            other = other.permute(self._labels)
        if self._bonds != other._bonds:
            raise ValueError("bond structures differ")
        out = self._meta_view()
        out._name = ""
        if self.is_sym:
            out._blocks = [
                DenseTensor(op(b.view(), other._blocks[other._lookup[qn]].view()))
                for qn, b in zip(self._qns, self._blocks)]
        else:
            out._blocks = [DenseTensor(op(self._blocks[0].view(),
                                          other._blocks[0].view()))]
        return out

    def __add__(self, other):
        return self._binary(other, np.add, "+")

    def __radd__(self, other):
        return self._binary(other, lambda a, b: np.add(b, a), "+")

    def __sub__(self, other):
        return self._binary(other, np.subtract, "-")

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: np.subtract(b, a), "-")

    def __mul__(self, other):
        return self._binary(other, np.multiply, "*")

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: np.multiply(b, a), "*")

    def __truediv__(self, other):
        return self._binary(other, np.true_divide, "/")

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: np.true_divide(b, a), "/")

    def __neg__(self):
        return self._binary(-1, np.multiply, "*")

    def norm(self):
        """Two-norm over all stored elements."""
        acc = 0.0
        for b in self._blocks:
            acc += float(np.sum(np.abs(b._storage) ** 2))
        return float(np.sqrt(acc))

    # -- copies -------------------------------------------------------------------

    def clone(self):
        """Deep copy: independent metadata and element storage."""
        out = self._meta_view()
        out._blocks = [b.clone() for b in self._blocks]
        return out

    def same_data(self, other):
        """True iff the element storage is shared with ``other``."""
        if not isinstance(other, UniTensor) or len(self._blocks) != len(other._blocks):
            return False
        return all(a.same_data(b) for a, b in zip(self._blocks, other._blocks))

    def astype(self, dtype):
        out = self._meta_view()
        out._blocks = [b.astype(dtype) for b in self._blocks]
        return out

    def contiguous_(self):
        for b in self._blocks:
            b.contiguous_()
        return self

    # -- display --------------------------------------------------------------------

    def print_diagram(self):
        print(self.diagram())

    def diagram(self):
        head = [f"tensor Name : {self._name}",
                f"tensor Rank : {self.rank}",
                f"block_form  : {self.is_sym}"]
        if self.is_sym:
            head.append(f"valid blocks: {self.nblocks}")
            head.append(f"braket_form : {self.braket_form}")
        head.append("is_diag     : False")
        head.append(f"device      : {storage.DEVICE}")
        left = [(self._labels[i], self._bonds[i].dim)
                for i in range(self._rowrank)]
        right = [(self._labels[i], self._bonds[i].dim)
                 for i in range(self._rowrank, self.rank)]
        lw = max([len(str(l)) for l, _ in left], default=1)
        dw = max([len(str(d)) for d in self.shape], default=1)
        inner = 2 * dw + 8
        directed = self.is_sym or all(b.btype != REGULAR for b in self._bonds)
        la = "-->" if directed else "___"
        ra = "-->" if directed else "___"
        pad = " " * (lw + 6)
        rows = max(len(left), len(right), 1)
        lines = [pad + " " + "-" * inner,
                 pad + "/" + " " * inner + "\\"]
        for i in range(rows):
            if i < len(left):
                lbl, d = left[i]
                lpart = f" {str(lbl).rjust(lw)} {la} |"
                ldim = str(d).ljust(dw)
            else:
                lpart = pad + "|"
                ldim = " " * dw
            if i < len(right):
                lbl, d = right[i]
                rdim = str(d).rjust(dw)
                rpart = f"| {ra} {lbl}"
            else:
                rdim = " " * dw
                rpart = "|"
            lines.append(f"{lpart}  {ldim}    {rdim}  {rpart}")
            lines.append(pad + "|" + " " * inner + "|")
        lines[-1] = pad + "\\" + " " * inner + "/"
        lines.append(pad + " " + "-" * inner)
        return "\n".join(head) + "\n" + "\n".join(lines) + "\n"

    def __str__(self):
        out = [f"Tensor name: {self._name}",
               f"block_form : {self.is_sym}"]
        if not self.is_sym:
            out.append(f"contiguous : {self.is_contiguous}")
            out.append("")
            out.append(str(self._blocks[0]))
            return "\n".join(out)
        out.append(f"braket_form: {self.braket_form}")
        for i, (qn, blk) in enumerate(zip(self._qns, self._blocks)):
            out.append("=" * 24)
            out.append(f"BLOCK [#{i}]")
            for lbl, b, k in zip(self._labels, self._bonds, qn):
                charges = ",".join(
                    f"{s}({q:+d})" for s, q in zip(b.syms, b.sectors[k][0]))
                out.append(f"  {lbl}: Qn [{k}] {charges}")
            out.append(str(blk))
        return "\n".join(out)

    def print_blocks(self):
        print(str(self))

    def __repr__(self):
        kind = "sym" if self.is_sym else "dense"
        return (f"<UniTensor {self._name!r} labels={self._labels} "
                f"shape={self.shape} {kind} dtype={dtype_name(self.dtype)}>")

    # -- persistence ------------------------------------------------------------------

    def save(self, path):
        from .io import save_unitensor
        save_unitensor(self, path)

    @classmethod
    def load(cls, path):
        from .io import load_unitensor
        return load_unitensor(path)


class ElementProxy:
    """Reference to one element of a :class:`UniTensor`.

    For symmetric tensors an address outside every valid block yields a
    proxy whose :meth:`exists` is False; reading or writing through it
    raises.
    """

    __slots__ = ("_ut", "_pos", "_index")

    def __init__(self, ut, pos, index):
        self._ut = ut
        self._pos = pos
        self._index = index

    def exists(self):
        return self._pos is not None

    @property
    def value(self):
        if self._pos is None:
            raise ValueError("trying to access an element that does not "
                             "exist; check with .exists() first")
        return self._ut._blocks[self._pos].view()[self._index].item()

    @value.setter
    def value(self, v):
        if self._pos is None:
            raise ValueError("trying to assign an element that does not "
                             "exist; check with .exists() first")
        self._ut._blocks[self._pos].view()[self._index] = v


def _check_labels(labels, rank):
    if len(labels) != rank:
        raise ValueError(f"got {len(labels)} labels for rank {rank}")
    if not all(isinstance(l, str) for l in labels):
        raise TypeError("labels must be strings")
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate labels in {labels}")


def _check_rowrank(r, rank):
    if not 0 <= int(r) <= rank:
        raise ValueError(f"rowrank must be in [0, {rank}], got {r}")


def _is_bond_list(seq):
    return (isinstance(seq, (list, tuple)) and len(seq) > 0
            and all(isinstance(b, Bond) for b in seq))
