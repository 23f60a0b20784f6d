"""Dense strided numeric arrays with lazy axis permutation.

:class:`DenseTensor` keeps a flat, row-major buffer together with a
permutation that maps logical axes to storage axes.  ``permute`` only
rewrites that mapping; the buffer is rearranged when ``contiguous`` is
called (and implicitly inside ``reshape`` when needed).  All handles are
references: metadata-changing methods return a new handle that shares the
element buffer with the original.

Supported dtypes are float64, complex128, int64 and bool.
"""

import numpy as np

Float64 = np.dtype(np.float64)
Complex128 = np.dtype(np.complex128)
Int64 = np.dtype(np.int64)
Bool = np.dtype(np.bool_)

SUPPORTED_DTYPES = (Float64, Complex128, Int64, Bool)

DEVICE = "CPU"

_DTYPE_NAMES = {Float64: "float64", Complex128: "complex128",
                Int64: "int64", Bool: "bool"}


def check_dtype(dtype):
    dt = np.dtype(dtype)
    if dt not in SUPPORTED_DTYPES:
        raise TypeError(f"unsupported dtype {dt}; supported: "
                        + ", ".join(_DTYPE_NAMES.values()))
    return dt


def dtype_name(dtype):
    return _DTYPE_NAMES[np.dtype(dtype)]


class DenseTensor:
    """A multi-dimensional array with lazy permutation.

    Internally holds ``_storage`` (a C-contiguous numpy array whose axis
    order is the storage order) and ``_perm`` (logical axis k lives on
    storage axis ``_perm[k]``).  The logical element ``(i0, ..)`` reads the
    buffer at the row-major offset of the permuted multi-index.
    """

    __slots__ = ("_storage", "_perm")

    def __init__(self, array, _perm=None):
        arr = np.asarray(array)
        dt = check_dtype(arr.dtype)
        if not arr.flags["C_CONTIGUOUS"]:
            arr = np.ascontiguousarray(arr)
        self._storage = arr.astype(dt, copy=False)
        self._perm = tuple(range(arr.ndim)) if _perm is None else tuple(_perm)

    # -- basic properties ------------------------------------------------

    @property
    def shape(self):
        s = self._storage.shape
        return tuple(s[p] for p in self._perm)

    @property
    def rank(self):
        return self._storage.ndim

    @property
    def size(self):
        return self._storage.size

    @property
    def dtype(self):
        return self._storage.dtype

    @property
    def is_contiguous(self):
        return self._perm == tuple(range(self._storage.ndim))

    def view(self):
        """Numpy view in logical axis order (shares the buffer)."""
        return self._storage.transpose(self._perm)

    def numpy(self):
        """Copy of the logical array as a plain numpy array."""
        return np.array(self.view())

    def storage(self):
        """The flat buffer in memory order (a view; mutations propagate)."""
        return self._storage.reshape(-1)

    def item(self):
        if self.size != 1:
            raise ValueError(f"item() needs a single-element tensor, got {self.size}")
        return self._storage.reshape(-1)[0].item()

    # -- layout ----------------------------------------------------------

    def permute(self, *order):
        """New handle with logical axes reordered; the buffer is untouched."""
        order = _flatten_axes(order, self.rank)
        if sorted(order) != list(range(self.rank)):
            raise ValueError(f"invalid permutation {order} for rank {self.rank}")
        return DenseTensor.__new_from(self._storage,
                                      tuple(self._perm[o] for o in order))

    def permute_(self, *order):
        t = self.permute(*order)
        self._perm = t._perm
        return self

    def contiguous(self):
        """Handle whose buffer is in logical row-major order.

        Returns a buffer-sharing handle when already contiguous, otherwise
        reorders the elements into a fresh buffer.
        """
        if self.is_contiguous:
            return DenseTensor.__new_from(self._storage, self._perm)
        return DenseTensor(np.ascontiguousarray(self.view()))

    def contiguous_(self):
        if not self.is_contiguous:
            self._storage = np.ascontiguousarray(self.view())
            self._perm = tuple(range(self._storage.ndim))
        return self

    def reshape(self, *shape):
        """New handle with a new logical shape (element count preserved).

        A non-contiguous tensor is materialized first, so the result may or
        may not share the buffer with the input.
        """
        shape = _flatten_shape(shape)
        if int(np.prod(shape, dtype=np.int64)) != self.size:
            raise ValueError(f"cannot reshape {self.shape} (size {self.size}) "
                             f"into {shape}")
        if self.is_contiguous:
            base = self._storage
        else:
            base = np.ascontiguousarray(self.view())
        return DenseTensor(base.reshape(shape))

    def reshape_(self, *shape):
        t = self.reshape(*shape)
        self._storage = t._storage
        self._perm = t._perm
        return self

    def astype(self, dtype):
        dt = check_dtype(dtype)
        return DenseTensor(self.view().astype(dt))

    def clone(self):
        return DenseTensor(np.array(self._storage), self._perm)

    def same_data(self, other):
        return np.shares_memory(self._storage, other._storage)

    # -- element access --------------------------------------------------

    def __getitem__(self, key):
        out = self.view()[_as_key(key)]
        if np.ndim(out) == 0:
            return out.item()
        return DenseTensor(np.ascontiguousarray(out))

    def __setitem__(self, key, value):
        key = _as_key(key)
        view = self.view()
        if isinstance(value, DenseTensor):
            value = value.view()
        if isinstance(value, np.ndarray):
            if np.shape(view[key]) != value.shape:
                raise ValueError(f"slice assignment shape mismatch: "
                                 f"{np.shape(view[key])} vs {value.shape}")
        elif not np.isscalar(value):
            raise TypeError(f"cannot assign {type(value).__name__} into a tensor")
        view[key] = value

    # -- arithmetic -------------------------------------------------------

    def _binary(self, other, op):
        if isinstance(other, DenseTensor):
            if self.shape != other.shape:
                raise ValueError(f"elementwise op on mismatched shapes "
                                 f"{self.shape} vs {other.shape}")
            return DenseTensor(op(self.view(), other.view()))
        if isinstance(other, (int, float, complex, bool, np.generic)):
            return DenseTensor(np.asarray(op(self.view(), other)))
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, np.add)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: np.add(b, a))

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: np.subtract(b, a))

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: np.multiply(b, a))

    def __truediv__(self, other):
        return self._binary(other, np.true_divide)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: np.true_divide(b, a))

    def __neg__(self):
        return DenseTensor(-self.view())

    def norm(self):
        """Two-norm: sqrt of the sum of |element|^2."""
        return float(np.linalg.norm(self._storage.reshape(-1)))

    def conj(self):
        return DenseTensor(np.conj(self.view()))

    def conj_(self):
        if np.issubdtype(self.dtype, np.complexfloating):
            np.conj(self._storage, out=self._storage)
        return self

    def pow(self, p):
        """Elementwise power."""
        return DenseTensor(np.asarray(self.view() ** p))

    def pow_(self, p):
        self._storage **= p
        return self

    # -- display ----------------------------------------------------------

    def __str__(self):
        body = format_array(self.view())
        return (f"Total elem: {self.size}\n"
                f"type  : {dtype_name(self.dtype)}\n"
                f"device: {DEVICE}\n"
                f"Shape : ({','.join(str(d) for d in self.shape)})\n"
                f"{body}\n")

    def __repr__(self):
        return (f"<DenseTensor shape={self.shape} dtype={dtype_name(self.dtype)}"
                f" contiguous={self.is_contiguous}>")

    # -- internals ---------------------------------------------------------

    @staticmethod
    def __new_from(storage, perm):
        t = DenseTensor.__new__(DenseTensor)
        t._storage = storage
        t._perm = perm
        return t


def _flatten_axes(order, rank):
    if len(order) == 1 and isinstance(order[0], (list, tuple)):
        order = tuple(order[0])
    return tuple(int(o) for o in order)


def _flatten_shape(shape):
    if len(shape) == 1 and isinstance(shape[0], (list, tuple)):
        shape = tuple(shape[0])
    shape = tuple(int(s) for s in shape)
    if any(s < 1 for s in shape):
        raise ValueError(f"shape components must be >= 1, got {shape}")
    return shape


def _as_key(key):
    if isinstance(key, list):
        return tuple(key)
    return key


# -- generators -----------------------------------------------------------

def zeros(shape, dtype=Float64):
    return DenseTensor(np.zeros(_flatten_shape((shape,)), dtype=check_dtype(dtype)))

def ones(shape, dtype=Float64):
    return DenseTensor(np.ones(_flatten_shape((shape,)), dtype=check_dtype(dtype)))

def arange(n, dtype=Float64):
    return DenseTensor(np.arange(int(n), dtype=check_dtype(dtype)))

def eye(d, dtype=Float64):
    return DenseTensor(np.eye(int(d), dtype=check_dtype(dtype)))

def from_numpy(array):
    """Wrap a numpy array (coercing the dtype to the nearest supported one)."""
    arr = np.asarray(array)
    if arr.dtype not in SUPPORTED_DTYPES:
        if np.issubdtype(arr.dtype, np.complexfloating):
            arr = arr.astype(Complex128)
        elif np.issubdtype(arr.dtype, np.integer):
            arr = arr.astype(Int64)
        elif arr.dtype == np.bool_:
            arr = arr.astype(Bool)
        else:
            arr = arr.astype(Float64)
    return DenseTensor(arr)


def uniform(shape, low=0.0, high=1.0, dtype=Float64, seed=None):
    """Tensor of iid uniform samples in [low, high).

    Complex dtypes get independent real and imaginary parts.  The generator
    is numpy's PCG64; a fixed seed reproduces the buffer exactly within
    this library.
    """
    if not low < high:
        raise ValueError(f"uniform requires low < high, got [{low}, {high})")
    shape = _flatten_shape((shape,))
    dt = check_dtype(dtype)
    rng = np.random.default_rng(seed)
    if dt == Complex128:
        data = rng.uniform(low, high, shape) + 1j * rng.uniform(low, high, shape)
    else:
        data = rng.uniform(low, high, shape).astype(dt)
    return DenseTensor(np.asarray(data, dtype=dt))


def normal(shape, mean=0.0, std=1.0, dtype=Float64, seed=None):
    """Tensor of iid gaussian samples; see :func:`uniform` for RNG notes."""
    if std < 0:
        raise ValueError(f"std must be >= 0, got {std}")
    shape = _flatten_shape((shape,))
    dt = check_dtype(dtype)
    rng = np.random.default_rng(seed)
    if dt == Complex128:
        data = rng.normal(mean, std, shape) + 1j * rng.normal(mean, std, shape)
    else:
        data = rng.normal(mean, std, shape).astype(dt)
    return DenseTensor(np.asarray(data, dtype=dt))


def kron(a, b):
    """Kronecker product of two matrices.

    For a (m, n) and b (p, q) the result K is (m*p, n*q) with
    K[i*p + k, j*q + l] = a[i, j] * b[k, l].
    """
    if isinstance(a, DenseTensor):
        a = a.view()
    if isinstance(b, DenseTensor):
        b = b.view()
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("kron expects two matrices")
    return DenseTensor(np.kron(a, b))


def format_array(arr):
    """Nested-bracket rendering with %.5e-style entries."""
    arr = np.asarray(arr)

    def fmt(x):
        if isinstance(x, (np.bool_, bool)):
            return str(bool(x))
        if isinstance(x, (np.integer, int)):
            return str(int(x))
        if isinstance(x, (np.complexfloating, complex)):
            sign = "+" if x.imag >= 0 else "-"
            return f"{x.real:.5e}{sign}{abs(x.imag):.5e}j"
        return f"{x:.5e}"

    def rec(a, indent):
        if a.ndim == 0:
            return fmt(a[()])
        if a.ndim == 1:
            return "[" + " ".join(fmt(x) for x in a) + " ]"
        sep = "\n" + " " * (indent + 1)
        inner = sep.join(rec(x, indent + 1) for x in a)
        return "[" + inner + "]"

    return rec(arr, 0)
