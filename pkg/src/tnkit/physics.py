"""Spin-1/2 operator constants used by the solvers and demos."""

import numpy as np

from .storage import Complex128, DenseTensor

_PAULI = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(kind):
    """A 2x2 Pauli matrix ("x", "y", "z") or the identity ("i")."""
    try:
        return DenseTensor(_PAULI[kind.lower()].copy())
    except KeyError:
        raise ValueError(f"unknown Pauli matrix {kind!r}; "
                         f"use one of {sorted(_PAULI)}") from None


def spin_half(kind):
    """Spin-1/2 operators: "x", "y", "z" are the Paulis over two;
    "+" and "-" are the raising and lowering operators S+/S-."""
    k = kind.lower()
    if k in ("x", "y", "z"):
        return DenseTensor(_PAULI[k] / 2)
    if k == "+":
        return DenseTensor((_PAULI["x"] + 1j * _PAULI["y"]) / 2)
    if k == "-":
        return DenseTensor((_PAULI["x"] - 1j * _PAULI["y"]) / 2)
    raise ValueError(f"unknown spin operator {kind!r}")
