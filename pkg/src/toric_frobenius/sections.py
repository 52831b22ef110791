"""Global sections of O_X(D) by counting lattice points.

For a T-divisor ``D = sum a_i D_i`` the sections of O_X(D) have a basis
indexed by the lattice points of

    P_D = {m in M_Q : <m, v_i> + a_i >= 0 for all i},

each point ``m`` corresponding to the effective divisor ``(<m, v_i> + a_i)_i``
in the class of ``D``. Bounds on ``P_D`` come from Fourier-Motzkin elimination
over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Optional, Sequence, Union

from .classgroup import ClassGroup, DivisorClass
from .fan import Fan, is_complete, positive_relation
from .frobenius import DEFAULT_BUDGET, BudgetExceeded


class Unbounded(ArithmeticError):
    """h^0 is infinite: the section polyhedron has a recession direction."""


class _UnboundedType:
    def __repr__(self):
        return "UNBOUNDED"

    def __str__(self):
        return "unbounded"

    def __reduce__(self):
        return "UNBOUNDED"


UNBOUNDED = _UnboundedType()
Count = Union[int, _UnboundedType]


class NotComplete(ValueError):
    """The operation needs a complete fan."""


Inequality = tuple[tuple[Fraction, ...], Fraction]  # coeffs . x >= rhs


@dataclass(frozen=True)
class DivisorPolytope:
    """``{m : <m, v_i> + a_i >= 0}``, one inequality per ray in ray order."""

    normals: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.normals[0]) if self.normals else 0

    def inequalities(self) -> list[Inequality]:
        return [
            (tuple(Fraction(x) for x in v), Fraction(-a))
            for v, a in zip(self.normals, self.offsets)
        ]

    def contains(self, m: Sequence[int]) -> bool:
        return all(sum(x * y for x, y in zip(v, m)) + a >= 0
                   for v, a in zip(self.normals, self.offsets))

    def divisor_at(self, m: Sequence[int]) -> tuple[int, ...]:
        """The divisor ``div(chi^m) + D``, effective iff ``m`` is in the polytope."""
        return tuple(sum(x * y for x, y in zip(v, m)) + a
                     for v, a in zip(self.normals, self.offsets))


def polytope_of(fan: Fan, d: Sequence[int]) -> DivisorPolytope:
    d = tuple(int(x) for x in d)
    if len(d) != fan.n_rays:
        raise ValueError(f"T-divisor has length {len(d)}, expected {fan.n_rays}")
    return DivisorPolytope(fan.rays, d)


# -- Fourier-Motzkin ----------------------------------------------------------

def _normalize(ineq: Inequality) -> Inequality:
    coeffs, rhs = ineq
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return coeffs, rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def _prune(ineqs) -> tuple[list[Inequality], bool]:
    """Drop duplicates and dominated copies; report a constant contradiction."""
    best: dict[tuple[Fraction, ...], Fraction] = {}
    infeasible = False
    for ineq in ineqs:
        coeffs, rhs = _normalize(ineq)
        if not any(coeffs):
            infeasible = infeasible or rhs > 0
            continue
        if coeffs not in best or rhs > best[coeffs]:
            best[coeffs] = rhs
    return sorted(best.items()), infeasible


def eliminate(ineqs: Sequence[Inequality], k: int) -> tuple[list[Inequality], bool]:
    """Fourier-Motzkin step removing variable ``k``.

    Returns the pruned system (variable ``k`` now has coefficient 0
    everywhere) and whether a contradiction ``0 >= positive`` appeared.
    """
    pos = [q for q in ineqs if q[0][k] > 0]
    neg = [q for q in ineqs if q[0][k] < 0]
    out = [q for q in ineqs if q[0][k] == 0]
    for cp, bp in pos:
        for cn, bn in neg:
            s, t = -cn[k], cp[k]
            out.append((tuple(s * x + t * y for x, y in zip(cp, cn)), s * bp + t * bn))
    return _prune(out)


def coordinate_bounds(p: DivisorPolytope):
    """Per-coordinate rational bounds of ``p``.

    Returns None if ``p`` is empty, :data:`UNBOUNDED` if some coordinate is
    unbounded, and otherwise a list of ``(lo, hi)`` Fractions.
    """
    n = p.dim
    system, infeasible = _prune(p.inequalities())
    if infeasible:
        return None
    bounds = []
    unbounded = False
    for j in range(n):
        proj = system
        for k in range(n):
            if k != j:
                proj, infeasible = eliminate(proj, k)
                if infeasible:
                    return None
        lows = [rhs / c[j] for c, rhs in proj if c[j] > 0]
        highs = [rhs / c[j] for c, rhs in proj if c[j] < 0]
        lo = max(lows) if lows else None
        hi = min(highs) if highs else None
        if lo is not None and hi is not None and lo > hi:
            return None
        if lo is None or hi is None:
            unbounded = True
        bounds.append((lo, hi))
    return UNBOUNDED if unbounded else bounds


def lattice_points(p: DivisorPolytope) -> list[tuple[int, ...]]:
    """All lattice points of a bounded polytope, in lexicographic order."""
    bounds = coordinate_bounds(p)
    if bounds is None:
        return []
    if bounds is UNBOUNDED:
        raise Unbounded("polytope is unbounded")
    ranges = [range(ceil(lo), floor(hi) + 1) for lo, hi in bounds]
    return [m for m in product(*ranges) if p.contains(m)]


def count_lattice_points(p: DivisorPolytope) -> Count:
    """Exact number of lattice points, or :data:`UNBOUNDED`."""
    bounds = coordinate_bounds(p)
    if bounds is UNBOUNDED:
        return UNBOUNDED
    return len(lattice_points(p))


def h0(fan: Fan, cg: ClassGroup, c: DivisorClass) -> Count:
    """``h^0(O_X(c))``, or :data:`UNBOUNDED` when the polyhedron is infinite."""
    return count_lattice_points(polytope_of(fan, cg.representative(c)))


def count_effective_divisors(fan: Fan, cg: ClassGroup, c: DivisorClass,
                             budget: int = DEFAULT_BUDGET,
                             relation: Optional[Sequence[int]] = None) -> int:
    """Count effective T-divisors ``b >= 0`` with ``class_of(b) == c`` directly.

    Uses no polytope geometry. A positive relation ``sum lam_i v_i = 0``
    makes ``sum lam_i b_i`` constant on the class, which confines the search
    to finitely many ``b``; each candidate is tested with the class map.

    Raises:
        NotComplete: if the fan is not known to be complete and no
            ``relation`` is supplied.
        BudgetExceeded: after ``budget`` candidates.
    """
    if relation is None:
        if not is_complete(fan):
            raise NotComplete(f"{fan.label} is not known to be complete")
        relation = positive_relation(fan)
    lam = tuple(relation)
    a = cg.representative(c)
    target = sum(x * y for x, y in zip(lam, a))
    r = len(lam)
    visited = 0
    found = 0
    b = [0] * r

    def walk(i, remaining):
        nonlocal visited, found
        if i == r - 1:
            if remaining % lam[i]:
                return
            b[i] = remaining // lam[i]
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"more than {budget} candidate divisors")
            if cg.class_of(b) == c:
                found += 1
            return
        for x in range(remaining // lam[i] + 1):
            b[i] = x
            walk(i + 1, remaining - x * lam[i])

    if target >= 0:
        walk(0, target)
    return found
