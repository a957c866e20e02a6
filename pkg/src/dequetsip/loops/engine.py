"""Layer-by-layer evaluation of the corner-weighted quarter-plane recurrence.

A layer holds s(m, k, x, y) for one step count m.  Cells with x + y of the
wrong parity are identically zero, so a layer is stored on the two
checkerboard sublattices that can be occupied; on the sublattice with
parities (px, py) the cell (x, y) = (2i + px, 2j + py) has index (i, j).

Each sublattice is covered by *pieces*: dense int arrays over a box of
(k, i, j) indices.  Corner counts are split into blocks, and inside a block
the rows are split into bands that follow the triangle x + y <= bound, so
the stored area stays close to the cells that can still matter.  On odd
layers the reflection x <-> y maps one sublattice onto the other, so only
one is computed and the other is a transposed copy.

Truncations (``horizon`` is the number of steps at which loops must close):

* ``horizon=None``: every endpoint is kept (full table).
* ``graded=False``: keep states that can still return to the origin by
  step ``horizon``.
* ``graded=True``: additionally require ``half_length + k <= horizon // 2``,
  the total degree that survives the substitution a, u -> O(t).

States dropped by a truncation only ever feed other dropped states, so the
retained cells are exact.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

SUBLATTICES = {0: ((0, 0), (1, 1)), 1: ((1, 0), (0, 1))}
# One step back: (x, y) is entered by E, N, W, S from these offsets.
_ONE_STEP = ((-1, 0), (0, -1), (1, 0), (0, 1))
# Two steps back through the corner vertex: NW from (x+1, y-1), ES from (x-1, y+1).
_TWO_STEP = ((1, -1), (-1, 1))


@dataclass
class Piece:
    k0: int
    i0: int
    j0: int
    data: np.ndarray
    mirror: bool = False

    def box(self) -> tuple[int, int, int, int, int, int]:
        nk, ni, nj = self.data.shape
        return self.k0, self.k0 + nk, self.i0, self.i0 + ni, self.j0, self.j0 + nj


Layer = dict  # (px, py) -> {k0: list[Piece]}, k0 a multiple of the block size


def _side(bound: int, parity: int) -> int:
    return (bound - parity) // 2 + 1 if bound >= parity else 0


def corner_blocks(m: int, horizon: int | None, graded: bool, block: int,
                  scalar: bool) -> list[tuple[int, int, int]]:
    """(k0, k1, bound) for each corner block retained at step ``m``."""
    if horizon is not None and m > horizon:
        return []
    if scalar:
        return [(0, 1, m if horizon is None else min(m, horizon - m))]
    kmax = m // 2
    if graded:
        kmax = min(kmax, (horizon - m) // 2)
    out = []
    for k0 in range(0, kmax + 1, block):
        bound = m if horizon is None else min(m, horizon - m - (2 * k0 if graded else 0))
        if bound < 0:
            break
        out.append((k0, min(kmax + 1, k0 + block), bound))
    return out


def _bands(bound: int, px: int, py: int) -> list[tuple[int, int, int]]:
    """(i0, i1, width) rows covering 2i + px + 2j + py <= bound."""
    ni = _side(bound, px)
    if ni == 0 or _side(bound, py) == 0:
        return []
    nb = max(1, min(4, ni // 24))
    edges = [ni * b // nb for b in range(nb + 1)]
    out = []
    for i0, i1 in zip(edges, edges[1:]):
        if i1 <= i0:
            continue
        width = (bound - px - py - 2 * i0) // 2 + 1
        if width > 0:
            out.append((i0, i1, width))
    return out


def _allocate(m: int, shape: list[tuple[int, int, int]], dtype) -> Layer:
    parity = m % 2
    layer: Layer = {}
    primary = SUBLATTICES[parity] if parity == 0 else ((1, 0),)
    for px, py in primary:
        layer[(px, py)] = {
            k0: [Piece(k0, i0, 0, np.zeros((k1 - k0, i1 - i0, width), dtype=dtype))
                 for i0, i1, width in _bands(bound, px, py)]
            for k0, k1, bound in shape}
    if parity == 1:
        layer[(0, 1)] = {k0: [Piece(p.k0, p.j0, p.i0, p.data.transpose(0, 2, 1), True) for p in ps]
                         for k0, ps in layer[(1, 0)].items()}
    return layer


def _add_shifted(dst: Piece, dpar: tuple[int, int], src: Layer, block: int, kshift: int,
                 dx: int, dy: int, sign: int) -> None:
    """dst(k, x, y) += sign * src(k + kshift, x + dx, y + dy) wherever both are stored."""
    px, py = dpar
    qx, qy = (px + dx) % 2, (py + dy) % 2
    si, sj = (px + dx - qx) // 2, (py + dy - qy) // 2
    dk0, dk1, di0, di1, dj0, dj1 = dst.box()
    blocks = src.get((qx, qy))
    if not blocks:
        return
    lo = max(0, dk0 + kshift) // block * block
    candidates = [sp for b in range(lo, dk1 + kshift, block) for sp in blocks.get(b, ())]
    for sp in candidates:
        sk0, sk1, si0, si1, sj0, sj1 = sp.box()
        k0, k1 = max(dk0, sk0 - kshift), min(dk1, sk1 - kshift)
        i0, i1 = max(di0, si0 - si), min(di1, si1 - si)
        j0, j1 = max(dj0, sj0 - sj), min(dj1, sj1 - sj)
        if k1 <= k0 or i1 <= i0 or j1 <= j0:
            continue
        target = dst.data[k0 - dk0:k1 - dk0, i0 - di0:i1 - di0, j0 - dj0:j1 - dj0]
        piece = sp.data[k0 + kshift - sk0:k1 + kshift - sk0,
                        i0 + si - si0:i1 + si - si0, j0 + sj - sj0:j1 + sj - sj0]
        if sign > 0:
            target += piece
        else:
            target -= piece


def _fill(dst: Piece, par: tuple[int, int], prev1: Layer, prev2: Layer, block: int,
          modulus: int | None, scalar: tuple[int, int] | None) -> None:
    for dx, dy in _ONE_STEP:
        _add_shifted(dst, par, prev1, block, 0, dx, dy, +1)
    if scalar is None:
        for dx, dy in _TWO_STEP:
            _add_shifted(dst, par, prev2, block, -1, dx, dy, +1)
            _add_shifted(dst, par, prev2, block, 0, dx, dy, -1)
    else:
        scale, corner = scalar
        if scale != 1:
            dst.data *= scale
        if corner:
            extra = Piece(dst.k0, dst.i0, dst.j0, np.zeros_like(dst.data))
            for dx, dy in _TWO_STEP:
                _add_shifted(extra, par, prev2, block, 0, dx, dy, +1)
            if modulus is not None:
                np.remainder(extra.data, modulus, out=extra.data)
            extra.data *= corner
            dst.data += extra.data
    if modulus is not None:
        np.remainder(dst.data, modulus, out=dst.data)


def iter_layers(steps: int, *, horizon: int | None = None, graded: bool = False,
                modulus: int | None = None, scalar: tuple[int, int] | None = None,
                block: int = 16, threads: int = 1) -> Iterator[tuple[int, Layer]]:
    """Yield ``(m, layer)`` for m = 0..steps.

    ``modulus=None`` runs over Python integers, otherwise over int64 residues
    (the caller picks a modulus small enough that one layer's sums fit).
    ``scalar=(s, c)`` drops the k axis and folds the corner weight in:
    layer m is scaled by s**m and each corner correction by c, so a = r/s is
    encoded as ``(s, s*(r - s))``.  With ``threads > 1`` the pieces of a
    layer are filled concurrently; every piece writes only its own array.
    """
    dtype = object if modulus is None else np.int64
    prev2: Layer = {}
    prev1: Layer = {}
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for m in range(steps + 1):
            cur = _allocate(m, corner_blocks(m, horizon, graded, block, scalar is not None), dtype)
            jobs = [(p, par) for par, bl in cur.items() for ps in bl.values() for p in ps
                    if not p.mirror]
            if m == 0:
                for p, par in jobs:
                    if par == (0, 0) and p.k0 == 0 and p.i0 == 0:
                        p.data[0, 0, 0] = 1
            elif pool is None:
                for p, par in jobs:
                    _fill(p, par, prev1, prev2, block, modulus, scalar)
            else:
                list(pool.map(lambda job: _fill(job[0], job[1], prev1, prev2, block, modulus, scalar),
                              jobs))
            if m % 2 == 1:
                for ps in cur[(0, 1)].values():
                    for p in ps:
                        p.data = np.ascontiguousarray(p.data)
            yield m, cur
            prev2, prev1 = prev1, cur
    finally:
        if pool is not None:
            pool.shutdown()


def origin_values(layer: Layer) -> dict[int, int]:
    """k -> s(m, k, 0, 0) for an even layer."""
    out = {}
    for ps in layer.get((0, 0), {}).values():
        p = ps[0] if ps else None
        if p is not None and p.i0 == 0 and p.j0 == 0:
            for kk in range(p.data.shape[0]):
                out[p.k0 + kk] = int(p.data[kk, 0, 0])
    return out


def layer_entries(layer: Layer) -> Iterator[tuple[int, int, int, int]]:
    """Nonzero (k, x, y, value) of a layer."""
    for (px, py), blocks in layer.items():
        for p in (p for ps in blocks.values() for p in ps):
            for kk, i, j in zip(*np.nonzero(p.data)):
                yield (p.k0 + int(kk), 2 * (p.i0 + int(i)) + px,
                       2 * (p.j0 + int(j)) + py, int(p.data[kk, i, j]))
