"""Kernel dispatch: compiled extension when available, pure Python otherwise.

The two backends implement the same functions with identical semantics (and
identical search-tree node counts); the compiled one is just fast.  Call
:func:`backend_name` to see which one is active, or pass ``impl`` explicitly
where supported (the benchmark does).
"""

from __future__ import annotations

import numpy as np

from . import _fallback

try:  # pragma: no cover - depends on the build environment
    from . import _core  # type: ignore

    _impl = _core
except ImportError:  # pragma: no cover
    _impl = _fallback


def backend_name() -> str:
    return _impl.BACKEND


def pack_masks(masks, nbits: int) -> np.ndarray:
    """Pack python-int bitmasks into a (len, words) uint64 array."""
    nwords = max(1, (nbits + 63) // 64)
    out = np.zeros((len(masks), nwords), dtype=np.uint64)
    lim = (1 << 64) - 1
    for i, m in enumerate(masks):
        w = 0
        while m:
            out[i, w] = m & lim
            m >>= 64
            w += 1
    return out


def unpack_mask(words) -> int:
    m = 0
    for w in range(len(words) - 1, -1, -1):
        m = (m << 64) | int(words[w])
    return m


def opposition_matrix(perp_masks, masks, nbits: int, impl=None) -> np.ndarray:
    """Boolean matrix: entry (i, j) true iff perp_masks[i] & masks[j] == 0."""
    mod = impl or _impl
    pw = pack_masks(perp_masks, nbits)
    mw = pack_masks(masks, nbits)
    out = np.zeros((len(perp_masks), len(masks)), dtype=np.uint8)
    mod.pair_opposition(pw, mw, out)
    return out.astype(bool)


def subset_matrix(small_masks, big_masks, nbits: int, impl=None) -> np.ndarray:
    """Boolean matrix: entry (i, j) true iff small_masks[i] subset of big_masks[j]."""
    mod = impl or _impl
    sw = pack_masks(small_masks, nbits)
    bw = pack_masks(big_masks, nbits)
    out = np.zeros((len(small_masks), len(big_masks)), dtype=np.uint8)
    mod.subset_matrix(sw, bw, out)
    return out.astype(bool)


def max_clique(neighbor_masks, n: int, initial=(), node_limit: int = 0,
               time_limit: float = 0.0, impl=None) -> dict:
    """Exact maximum clique via branch and bound (see backend docstrings)."""
    mod = impl or _impl
    words = pack_masks(neighbor_masks, n)
    return mod.max_clique(words, n, list(initial), int(node_limit), float(time_limit))
