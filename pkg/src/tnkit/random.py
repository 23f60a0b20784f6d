"""In-place randomization of tensors, dense or block-sparse.

Works on :class:`~tnkit.storage.DenseTensor` and
:class:`~tnkit.unitensor.UniTensor` alike; for symmetric tensors every
stored block is filled.  Complex dtypes get independent real and
imaginary parts.  Seeding uses numpy's PCG64 generator and is
reproducible within this library.
"""

import numpy as np

from .storage import Complex128, DenseTensor
from .unitensor import UniTensor


def _blocks_of(t):
    if isinstance(t, UniTensor):
        return t.get_blocks_()
    if isinstance(t, DenseTensor):
        return [t]
    raise TypeError(f"cannot randomize a {type(t).__name__}")


def _fill(t, draw):
    rng_blocks = _blocks_of(t)
    for blk in rng_blocks:
        view = blk.view()
        if blk.dtype == Complex128:
            view[...] = draw(view.shape) + 1j * draw(view.shape)
        else:
            view[...] = draw(view.shape)
    return t


def uniform_(t, low=0.0, high=1.0, seed=None):
    """Overwrite elements with uniform samples in [low, high); returns t."""
    if not low < high:
        raise ValueError(f"uniform requires low < high, got [{low}, {high})")
    rng = np.random.default_rng(seed)
    return _fill(t, lambda shape: rng.uniform(low, high, shape))


def normal_(t, mean=0.0, std=1.0, seed=None):
    """Overwrite elements with gaussian samples; returns t."""
    if std < 0:
        raise ValueError(f"std must be >= 0, got {std}")
    rng = np.random.default_rng(seed)
    return _fill(t, lambda shape: rng.normal(mean, std, shape))
