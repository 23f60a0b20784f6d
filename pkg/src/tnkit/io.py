"""Tensor container file format.

Layout of a ``.utn`` file (all integers little-endian):

====================  =======================================================
bytes 0-4             magic ``b"TNXU\\x00"``
uint32                format version (currently 1)
uint32                length of the JSON header in bytes
header                UTF-8 JSON with keys ``name``, ``labels``, ``rowrank``,
                      ``dtype``, ``bonds`` and ``blocks``
payload               raw C-order little-endian element bytes of every block,
                      concatenated in block-enumeration order
====================  =======================================================

Each bond entry stores ``btype`` ("REGULAR"/"IN"/"OUT"), ``dim``, the
symmetry tags (``"U1"``, ``"Z2"``, ...) and the sector list
``[[charges, degeneracy], ...]``; each block entry stores its Qn-index
tuple (``null`` for dense tensors) and shape.
"""

import json
import struct

import numpy as np

from .bond import Bond, BondType
from .storage import DenseTensor
from .symmetry import symmetry_from_str
from .unitensor import UniTensor

MAGIC = b"TNXU\x00"
VERSION = 1

_DTYPES = {"float64": np.dtype(np.float64), "complex128": np.dtype(np.complex128),
           "int64": np.dtype(np.int64), "bool": np.dtype(np.bool_)}


def _bond_to_json(b):
    return {
        "btype": b.btype.name,
        "dim": b.dim,
        "syms": [str(s) for s in b.syms],
        "sectors": [[list(q), d] for q, d in b.sectors],
    }


def _bond_from_json(d):
    btype = BondType[d["btype"]]
    if d["sectors"]:
        return Bond(btype=btype,
                    sectors=[(tuple(q), deg) for q, deg in d["sectors"]],
                    syms=[symmetry_from_str(t) for t in d["syms"]])
    return Bond(d["dim"], btype)


def save_unitensor(ut, path):
    blocks = ut.get_blocks_()
    header = {
        "name": ut.name,
        "labels": ut.labels,
        "rowrank": ut.rowrank,
        "dtype": {v: k for k, v in _DTYPES.items()}[ut.dtype],
        "bonds": [_bond_to_json(b) for b in ut.bonds],
        "blocks": [
            {"qn": list(ut.block_qn_indices(i)) if ut.is_sym else None,
             "shape": list(blk.shape)}
            for i, blk in enumerate(blocks)
        ],
    }
    raw = json.dumps(header).encode()
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", VERSION))
        f.write(struct.pack("<I", len(raw)))
        f.write(raw)
        for blk in blocks:
            arr = np.ascontiguousarray(blk.view())
            f.write(arr.astype(arr.dtype.newbyteorder("<"), copy=False).tobytes())


def load_unitensor(path):
    with open(path, "rb") as f:
        magic = f.read(5)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a tensor container (bad magic {magic!r})")
        (version,) = struct.unpack("<I", f.read(4))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported format version {version}")
        (hlen,) = struct.unpack("<I", f.read(4))
        header = json.loads(f.read(hlen).decode())
        dtype = _DTYPES[header["dtype"]]
        bonds = [_bond_from_json(d) for d in header["bonds"]]
        ut = UniTensor(bonds, labels=header["labels"], name=header["name"],
                       dtype=dtype, rowrank=header["rowrank"])
        for i, binfo in enumerate(header["blocks"]):
            shape = tuple(binfo["shape"])
            count = int(np.prod(shape, dtype=np.int64))
            buf = f.read(count * dtype.itemsize)
            arr = np.frombuffer(buf, dtype=dtype.newbyteorder("<")).astype(dtype)
            block = DenseTensor(arr.reshape(shape))
            if ut.is_sym:
                expect = tuple(binfo["qn"])
                if ut.block_qn_indices(i) != expect:
                    raise ValueError(f"{path}: block {i} has Qn indices {expect}, "
                                     f"expected {ut.block_qn_indices(i)}")
            ut.put_block_(block, *( (i,) if ut.is_sym else () ))
        return ut
