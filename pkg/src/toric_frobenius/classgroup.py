"""The divisor class group Cl X = Z^r / {(<m, v_i>)_i : m in Z^n}.

Classes are stored in canonical coordinates ``Z^rho (+) Z/d_1 (+) ... (+) Z/d_k``
read off from a Smith decomposition of the ray matrix. The free block is put
in Hermite form so that, e.g., every ray of P^n has class 1 rather than -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Iterable, Sequence

from .fan import Fan, RaysDoNotSpan, validate
from .lattice import IntMatrix, hermite_rows, inverse_unimodular, smith_normal_form

TDivisor = tuple  # integer vector of length r, one coefficient per ray


@dataclass(frozen=True, order=True)
class DivisorClass:
    """Canonical coordinates of a class; torsion entries lie in ``[0, d_i)``."""

    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}

    def __str__(self):
        free = ",".join(map(str, self.free))
        if not self.torsion:
            return f"({free})"
        return f"({free}|{','.join(map(str, self.torsion))})"


@dataclass(frozen=True)
class ClassGroup:
    """Cl X together with the class map ``L : Z^r -> Cl X`` and a section of it.

    Build with :func:`compute_class_group`.
    """

    n_rays: int
    dim: int
    torsion_orders: tuple[int, ...]
    U: IntMatrix = field(repr=False)
    U_inv: IntMatrix = field(repr=False)
    torsion_positions: tuple[int, ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.n_rays - self.dim

    @property
    def coordinate_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Rows giving raw (unreduced) class coordinates, free rows first."""
        rows = [self.U.row(i) for i in range(self.dim, self.n_rays)]
        rows += [self.U.row(i) for i in self.torsion_positions]
        return tuple(rows)

    def describe(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion_orders]
        return " + ".join(parts) or "0"

    # -- construction of classes ------------------------------------------

    def element(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> DivisorClass:
        free = tuple(int(x) for x in free)
        torsion = tuple(int(x) for x in torsion)
        if len(free) != self.rank or len(torsion) != len(self.torsion_orders):
            raise ValueError(
                f"class needs {self.rank} free and {len(self.torsion_orders)} torsion "
                f"coordinates, got {len(free)} and {len(torsion)}"
            )
        return DivisorClass(free, tuple(t % d for t, d in zip(torsion, self.torsion_orders)))

    def from_flat(self, coords: Sequence[int]) -> DivisorClass:
        """Class from free coordinates followed by torsion coordinates."""
        return self.element(coords[:self.rank], coords[self.rank:])

    def zero(self) -> DivisorClass:
        return DivisorClass((0,) * self.rank, (0,) * len(self.torsion_orders))

    def class_of(self, d: Sequence[int]) -> DivisorClass:
        """The class map L."""
        d = tuple(int(x) for x in d)
        if len(d) != self.n_rays:
            raise ValueError(f"T-divisor has length {len(d)}, expected {self.n_rays}")
        y = self.U @ d
        return DivisorClass(
            tuple(y[self.dim:]),
            tuple(y[i] % o for i, o in zip(self.torsion_positions, self.torsion_orders)),
        )

    def generators(self) -> list[DivisorClass]:
        """``L(e_i)`` for every ray, in ray order."""
        r = self.n_rays
        return [self.class_of([int(i == j) for j in range(r)]) for i in range(r)]

    def representative(self, c: DivisorClass) -> TDivisor:
        """A T-divisor whose class is ``c`` (deterministic)."""
        self._check(c)
        y = [0] * self.n_rays
        for pos, t in zip(self.torsion_positions, c.torsion):
            y[pos] = t
        y[self.dim:] = c.free
        return self.U_inv @ y

    # -- group law -----------------------------------------------------------

    def add(self, a: DivisorClass, b: DivisorClass) -> DivisorClass:
        return DivisorClass(
            tuple(x + y for x, y in zip(a.free, b.free)),
            tuple((x + y) % d for x, y, d in zip(a.torsion, b.torsion, self.torsion_orders)),
        )

    def neg(self, a: DivisorClass) -> DivisorClass:
        return self.scale(a, -1)

    def sub(self, a: DivisorClass, b: DivisorClass) -> DivisorClass:
        return self.add(a, self.neg(b))

    def scale(self, a: DivisorClass, k: int) -> DivisorClass:
        return DivisorClass(
            tuple(k * x for x in a.free),
            tuple((k * x) % d for x, d in zip(a.torsion, self.torsion_orders)),
        )

    def sum(self, classes: Iterable[DivisorClass]) -> DivisorClass:
        total = self.zero()
        for c in classes:
            total = self.add(total, c)
        return total

    def ell_division_solutions(self, c: DivisorClass, ell: int) -> list[DivisorClass]:
        """All ``E`` with ``ell * E == c``, sorted.

        Empty, or of size ``prod gcd(ell, d_i)``.
        """
        if ell < 1:
            raise ValueError("ell must be positive")
        if any(x % ell for x in c.free):
            return []
        free = tuple(x // ell for x in c.free)
        choices = []
        for t, d in zip(c.torsion, self.torsion_orders):
            g = gcd(ell, d)
            if t % g:
                return []
            step = d // g
            base = (t // g) * pow(ell // g, -1, step) % step if step > 1 else 0
            choices.append([base + k * step for k in range(g)])
        return sorted(DivisorClass(free, tuple(ts)) for ts in product(*choices))

    def shares_factor_with(self, ell: int) -> bool:
        """True if ``ell`` has a common factor with some torsion order."""
        return any(gcd(ell, d) > 1 for d in self.torsion_orders)

    def classes_in_box(self, bound: int) -> list[DivisorClass]:
        """Every class with free coordinates in ``[-bound, bound]``, all torsion."""
        free = product(range(-bound, bound + 1), repeat=self.rank)
        tors = list(product(*(range(d) for d in self.torsion_orders)))
        return [DivisorClass(f, t) for f in free for t in tors]

    def _check(self, c: DivisorClass):
        if len(c.free) != self.rank or len(c.torsion) != len(self.torsion_orders):
            raise ValueError(f"{c} is not a class of {self.describe()}")


def compute_class_group(fan: Fan) -> ClassGroup:
    validate(fan).raise_if_invalid()
    P = fan.ray_matrix()
    snf = smith_normal_form(P)
    if snf.rank != fan.dim:
        raise RaysDoNotSpan(f"rays have rank {snf.rank} < dim {fan.dim}")
    torsion_positions = tuple(i for i, d in enumerate(snf.invariant_factors) if d > 1)
    torsion_orders = tuple(snf.invariant_factors[i] for i in torsion_positions)
    rows = snf.U.to_lists()
    # Any unimodular change of the free rows preserves the image of P.
    rows[fan.dim:] = hermite_rows(rows[fan.dim:])
    U = IntMatrix.from_rows(rows, cols=fan.n_rays)
    return ClassGroup(
        n_rays=fan.n_rays,
        dim=fan.dim,
        torsion_orders=torsion_orders,
        U=U,
        U_inv=inverse_unimodular(U),
        torsion_positions=torsion_positions,
    )
