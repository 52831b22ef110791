"""Frobenius push-forwards of rank-one reflexive sheaves.

For an integer ``ell >= 1`` and a class ``D`` we have

    F_* O(D) = (+)_E O(E)^{m(E, D)},

where ``m(E, D)`` is the number of points ``p`` of the cube ``{0..ell-1}^r``
whose class ``L(p)`` equals ``D - ell*E``. Everything therefore reduces to the
distribution of cube-point classes, which is computed two ways:

* :func:`class_distribution_cube` enumerates the ``ell^r`` cube points;
* :func:`class_distribution_convolution` multiplies the ``r`` factors
  ``1 + x^{L(e_i)} + ... + x^{(ell-1) L(e_i)}`` in the group algebra of Cl X.

The first is the oracle, the second the production path.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Iterator, Mapping, Optional

import numpy as np

from .classgroup import ClassGroup, DivisorClass

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 20
_DENSE_CELL_LIMIT = 1 << 25
_INT64_SAFE = 1 << 62


class BudgetExceeded(RuntimeError):
    """Cube enumeration would visit more points than allowed."""


class AlgorithmMismatch(AssertionError):
    """Cube enumeration and convolution disagree."""


@dataclass(frozen=True)
class ClassDistribution:
    """How many cube points lie in each class; only positive counts are stored."""

    ell: int
    counts: Mapping[DivisorClass, int] = field(hash=False)

    def __getitem__(self, c: DivisorClass) -> int:
        return self.counts.get(c, 0)

    def __iter__(self) -> Iterator[DivisorClass]:
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def items(self):
        return self.counts.items()

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __eq__(self, other):
        if not isinstance(other, ClassDistribution):
            return NotImplemented
        return self.ell == other.ell and dict(self.counts) == dict(other.counts)


@dataclass(frozen=True)
class Decomposition:
    """``F_* O(D)`` as a finite map ``E -> m(E, D) > 0``."""

    source: DivisorClass
    ell: int
    summands: Mapping[DivisorClass, int] = field(hash=False)
    torsion_orders: tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return sum(self.summands.values())

    @property
    def ell_shares_torsion(self) -> bool:
        """``gcd(ell, d_i) > 1`` for some torsion order ``d_i``."""
        return any(np.gcd(self.ell, d) > 1 for d in self.torsion_orders)

    def __getitem__(self, E: DivisorClass) -> int:
        return self.summands.get(E, 0)

    def __eq__(self, other):
        if not isinstance(other, Decomposition):
            return NotImplemented
        return (self.source, self.ell, dict(self.summands)) == (
            other.source, other.ell, dict(other.summands))

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "source": self.source.to_json(),
            "rank": self.rank,
            "torsion_orders": list(self.torsion_orders),
            "ell_shares_torsion": self.ell_shares_torsion,
            "summands": [
                {"class": E.to_json(), "multiplicity": m}
                for E, m in sorted(self.summands.items())
            ],
        }

    def __str__(self):
        parts = []
        for E, m in sorted(self.summands.items()):
            parts.append(f"O{E}" + (f"^{m}" if m > 1 else ""))
        return " + ".join(parts)


def _generator_rows(cg: ClassGroup) -> list[tuple[int, ...]]:
    return [g.free + g.torsion for g in cg.generators()]


def _free_box(gens, rho: int, ell: int) -> tuple[list[int], list[int]]:
    lo = [(ell - 1) * sum(min(0, g[j]) for g in gens) for j in range(rho)]
    hi = [(ell - 1) * sum(max(0, g[j]) for g in gens) for j in range(rho)]
    return lo, hi


def _to_distribution(cg: ClassGroup, ell: int, raw: Mapping[tuple, int]) -> ClassDistribution:
    rho = cg.rank
    counts = {DivisorClass(tuple(k[:rho]), tuple(k[rho:])): int(v) for k, v in raw.items() if v}
    return ClassDistribution(ell, dict(sorted(counts.items())))


def _dense_to_distribution(cg: ClassGroup, ell: int, arr: np.ndarray, lo) -> ClassDistribution:
    rho = cg.rank
    raw = {}
    for idx in zip(*np.nonzero(arr)):
        idx = tuple(int(i) for i in idx)
        key = tuple(l + i for l, i in zip(lo, idx[:rho])) + idx[rho:]
        raw[key] = arr[idx]
    if arr.ndim == 0 and arr[()]:
        raw[()] = arr[()]
    return _to_distribution(cg, ell, raw)


def _check_ell(ell: int):
    if int(ell) != ell or ell < 1:
        raise ValueError(f"ell must be a positive integer, got {ell!r}")


# -- cube enumeration ---------------------------------------------------------

def _cube_pointwise(cg: ClassGroup, ell: int) -> ClassDistribution:
    counts: dict[tuple, int] = defaultdict(int)
    for p in product(range(ell), repeat=cg.n_rays):
        c = cg.class_of(p)
        counts[c.free + c.torsion] += 1
    return _to_distribution(cg, ell, counts)


def class_distribution_cube(cg: ClassGroup, ell: int, budget: int = DEFAULT_BUDGET) -> ClassDistribution:
    """Count cube points ``p in {0..ell-1}^r`` per class by visiting every point.

    Raises:
        BudgetExceeded: if ``ell**r > budget``.
    """
    _check_ell(ell)
    r = cg.n_rays
    npoints = ell ** r
    if npoints > budget:
        raise BudgetExceeded(
            f"cube has {ell}^{r} = {npoints} points, budget is {budget}; "
            "use the convolution algorithm"
        )
    gens = _generator_rows(cg)
    rho = cg.rank
    lo, hi = _free_box(gens, rho, ell)
    radices = [h - l + 1 for l, h in zip(lo, hi)] + list(cg.torsion_orders)
    cells = prod(radices)
    biggest = max([abs(x) for g in gens for x in g] + [1]) * (ell - 1) * r
    if npoints >= _INT64_SAFE or biggest >= _INT64_SAFE or cells >= _INT64_SAFE:
        return _cube_pointwise(cg, ell)

    G = np.array(gens, dtype=np.int64).reshape(r, rho + len(cg.torsion_orders))
    orders = np.array(cg.torsion_orders, dtype=np.int64)
    strides = np.array([prod(radices[j + 1:]) for j in range(len(radices))], dtype=np.int64)
    offsets = np.array(lo + [0] * len(cg.torsion_orders), dtype=np.int64)
    use_bincount = cells <= max(_CHUNK, 4 * npoints)
    dense = np.zeros(cells, dtype=np.int64) if use_bincount else None
    sparse: dict[int, int] = defaultdict(int)

    # Vectorize over the trailing ``s`` cube axes; loop over the leading ones.
    s = 1
    while s < r and ell ** (s + 1) <= _CHUNK:
        s += 1
    s = min(s, r)
    steps = np.arange(ell, dtype=np.int64)
    block = np.zeros((G.shape[1],) + (ell,) * s, dtype=np.int64)
    for axis, i in enumerate(range(r - s, r)):
        shape = [1] * s
        shape[axis] = ell
        block += (G[i][:, None] * steps[None, :]).reshape([G.shape[1]] + shape)
    block = block.reshape(G.shape[1], -1)
    for prefix in product(range(ell), repeat=r - s):
        base = G[:r - s].T @ np.array(prefix, dtype=np.int64) if r > s else 0
        keys = np.zeros(block.shape[1], dtype=np.int64)
        for j in range(block.shape[0]):
            row = block[j] + (base[j] - offsets[j] if r > s else -offsets[j])
            if j >= rho:
                row %= orders[j - rho]
            keys += strides[j] * row
        if use_bincount:
            dense += np.bincount(keys, minlength=cells)
        else:
            uniq, cnt = np.unique(keys, return_counts=True)
            for k, v in zip(uniq.tolist(), cnt.tolist()):
                sparse[k] += v

    raw = {}
    items = ((int(k), int(dense[k])) for k in np.nonzero(dense)[0]) if use_bincount else sparse.items()
    for key, cnt in items:
        coords = []
        for s, rad in zip(strides.tolist(), radices):
            coords.append(key // s % rad)
        raw[tuple(c + o for c, o in zip(coords, offsets.tolist()))] = cnt
    dist = _to_distribution(cg, ell, raw)
    if dist.total != npoints:
        raise ArithmeticError("cube enumeration lost points")
    return dist


# -- convolution in the group algebra -----------------------------------------

def _convolution_sparse(cg: ClassGroup, ell: int, gens) -> ClassDistribution:
    rho = cg.rank
    orders = cg.torsion_orders
    dist: dict[tuple, int] = {tuple([0] * (rho + len(orders))): 1}
    for g in gens:
        new: dict[tuple, int] = defaultdict(int)
        for key, cnt in dist.items():
            for a in range(ell):
                k = tuple(x + a * y for x, y in zip(key[:rho], g[:rho])) + tuple(
                    (x + a * y) % d for x, y, d in zip(key[rho:], g[rho:], orders))
                new[k] += cnt
        dist = new
    return _to_distribution(cg, ell, dist)


def class_distribution_convolution(cg: ClassGroup, ell: int) -> ClassDistribution:
    """The same distribution as :func:`class_distribution_cube`, as a product.

    Multiplies ``prod_i (1 + x^{g_i} + ... + x^{(ell-1) g_i})`` with
    ``g_i = L(e_i)`` exactly in the group algebra of Cl X, factors in ray
    order. Intermediate results live on a dense array over the bounding box
    of their support when that box is small, otherwise in a dict.
    """
    _check_ell(ell)
    gens = _generator_rows(cg)
    rho = cg.rank
    orders = tuple(cg.torsion_orders)
    lo_all, hi_all = _free_box(gens, rho, ell)
    cells = prod(h - l + 1 for l, h in zip(lo_all, hi_all)) * prod(orders)
    if cells > _DENSE_CELL_LIMIT:
        return _convolution_sparse(cg, ell, gens)

    dtype = np.int64 if ell ** cg.n_rays < _INT64_SAFE else object
    arr = np.zeros((1,) * rho + orders, dtype=dtype)
    arr[(0,) * arr.ndim] = 1
    lo = [0] * rho
    torsion_axes = tuple(range(rho, rho + len(orders)))
    for g in gens:
        gf, gt = g[:rho], g[rho:]
        new_lo = [l + (ell - 1) * min(0, x) for l, x in zip(lo, gf)]
        new_shape = tuple(
            s + (ell - 1) * abs(x) for s, x in zip(arr.shape[:rho], gf)) + orders
        new = np.zeros(new_shape, dtype=dtype)
        shifted = arr
        for a in range(ell):
            if a and any(gt):
                shifted = np.roll(arr, [a * x for x in gt], axis=torsion_axes)
            window = tuple(
                slice(l + a * x - nl, l + a * x - nl + s)
                for l, x, nl, s in zip(lo, gf, new_lo, arr.shape[:rho])
            )
            new[window] += shifted
        arr, lo = new, new_lo
    dist = _dense_to_distribution(cg, ell, arr, lo)
    return dist


def class_distribution(cg: ClassGroup, ell: int, algorithm: str = "conv",
                       budget: int = DEFAULT_BUDGET) -> ClassDistribution:
    """Dispatch on ``algorithm`` in ``{"conv", "cube", "both"}``."""
    if algorithm == "conv":
        return class_distribution_convolution(cg, ell)
    if algorithm == "cube":
        return class_distribution_cube(cg, ell, budget)
    if algorithm == "both":
        cube = class_distribution_cube(cg, ell, budget)
        conv = class_distribution_convolution(cg, ell)
        if cube != conv:
            raise AlgorithmMismatch(f"cube and convolution disagree for ell={ell}")
        return conv
    raise ValueError(f"unknown algorithm {algorithm!r}")


# -- multiplicities -----------------------------------------------------------

def multiplicity(cg: ClassGroup, dist: ClassDistribution, D: DivisorClass,
                 E: DivisorClass, ell: int) -> int:
    """``m(E, D)``: the number of cube points in the class ``D - ell*E``."""
    if dist.ell != ell:
        raise ValueError("distribution was computed for a different ell")
    return dist[cg.sub(D, cg.scale(E, ell))]


def decompose(cg: ClassGroup, D: DivisorClass, ell: int,
              dist: Optional[ClassDistribution] = None, algorithm: str = "conv",
              budget: int = DEFAULT_BUDGET) -> Decomposition:
    """Decompose ``F_* O(D)`` for the ``ell``-th Frobenius.

    Each cube class ``c`` contributes ``dist[c]`` to every ``E`` solving
    ``ell*E = D - c``; when ``ell`` shares a factor with a torsion order there
    can be several such ``E`` and each gets the full count.
    """
    cg._check(D)
    if dist is None:
        dist = class_distribution(cg, ell, algorithm, budget)
    elif dist.ell != ell:
        raise ValueError("distribution was computed for a different ell")
    summands: dict[DivisorClass, int] = {}
    for c, count in dist.items():
        for E in cg.ell_division_solutions(cg.sub(D, c), ell):
            summands[E] = summands.get(E, 0) + count
    return Decomposition(D, ell, dict(sorted(summands.items())), cg.torsion_orders)


def shift(cg: ClassGroup, dec: Decomposition, E0: DivisorClass) -> dict[DivisorClass, int]:
    """Multiplicity map of ``dec`` with every key translated by ``E0``."""
    return {cg.add(E, E0): m for E, m in dec.summands.items()}
