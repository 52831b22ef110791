"""Fans given by primitive ray generators and maximal cones."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .lattice import IntMatrix, bareiss_det, content, smith_normal_form


class FanError(ValueError):
    """Base class for violated fan invariants."""

    invariant = "fan"


class NonPrimitiveRay(FanError):
    invariant = "primitive rays"


class DuplicateRay(FanError):
    invariant = "distinct rays"


class RaysDoNotSpan(FanError):
    invariant = "rays span N (x) Q"


class EmptyConeCover(FanError):
    invariant = "every ray lies in a maximal cone"


class InvalidCone(FanError):
    invariant = "maximal cones are nonempty, in range and not nested"


class UnknownBuiltin(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """A fan in N = Z^dim.

    ``max_cones`` holds sorted tuples of 0-based ray indices. Construction does
    not validate; call :func:`validate` (or :meth:`check`) before computing.
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    name: Optional[str] = field(default=None, compare=False)

    @classmethod
    def from_lists(cls, dim, rays, max_cones, name=None) -> "Fan":
        return cls(
            dim=int(dim),
            rays=tuple(tuple(int(x) for x in v) for v in rays),
            max_cones=tuple(tuple(sorted(int(i) for i in c)) for c in max_cones),
            name=name,
        )

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntMatrix:
        """The r x n matrix whose rows are the rays; ``m -> (<m, v_i>)_i``."""
        return IntMatrix.from_rows(self.rays, cols=self.dim)

    def check(self) -> "Fan":
        validate(self).raise_if_invalid()
        return self

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "rays": [list(v) for v in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }
        if self.name is not None:
            out["name"] = self.name
        return out

    @property
    def label(self) -> str:
        return self.name or f"fan(dim={self.dim}, rays={self.n_rays})"


@dataclass
class ValidationReport:
    violations: list[FanError]

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_invalid(self):
        if self.violations:
            raise self.violations[0]

    def __bool__(self):
        return self.ok


def validate(fan: Fan) -> ValidationReport:
    """Collect every violated invariant of ``fan``. Pure."""
    problems: list[FanError] = []
    for i, v in enumerate(fan.rays):
        if len(v) != fan.dim:
            problems.append(FanError(f"ray {i} has length {len(v)}, expected {fan.dim}"))
            return ValidationReport(problems)
    for i, v in enumerate(fan.rays):
        g = content(v)
        if g != 1:
            what = "zero" if g == 0 else f"gcd {g}"
            problems.append(NonPrimitiveRay(f"ray {i} {list(v)} is not primitive ({what})"))
    seen: dict[tuple[int, ...], int] = {}
    for i, v in enumerate(fan.rays):
        if v in seen:
            problems.append(DuplicateRay(f"ray {i} duplicates ray {seen[v]}"))
        else:
            seen[v] = i
    if fan.ray_matrix().rank() != fan.dim:
        problems.append(RaysDoNotSpan(
            f"rays have rank {fan.ray_matrix().rank()} < dim {fan.dim}"))
    cones = [set(c) for c in fan.max_cones]
    for k, c in enumerate(cones):
        if not c:
            problems.append(InvalidCone(f"maximal cone {k} is empty"))
        bad = [i for i in c if not 0 <= i < fan.n_rays]
        if bad:
            problems.append(InvalidCone(f"maximal cone {k} has out-of-range indices {bad}"))
    for a, b in combinations(range(len(cones)), 2):
        if cones[a] <= cones[b] or cones[b] <= cones[a]:
            problems.append(InvalidCone(f"maximal cones {a} and {b} are nested"))
    covered = set().union(*cones) if cones else set()
    missing = [i for i in range(fan.n_rays) if i not in covered]
    if missing:
        problems.append(EmptyConeCover(f"rays {missing} lie in no maximal cone"))
    return ValidationReport(problems)


def _cone_matrix(fan: Fan, cone: Sequence[int]) -> IntMatrix:
    return IntMatrix.from_rows([fan.rays[i] for i in cone], cols=fan.dim)


def is_simplicial(fan: Fan) -> bool:
    return all(_cone_matrix(fan, c).rank() == len(c) for c in fan.max_cones)


def is_smooth(fan: Fan) -> bool:
    """Every maximal cone is generated by part of a Z-basis of N."""
    for c in fan.max_cones:
        snf = smith_normal_form(_cone_matrix(fan, c))
        if snf.rank != len(c) or any(d != 1 for d in snf.invariant_factors):
            return False
    return True


def is_complete(fan: Fan) -> Optional[bool]:
    """Completeness via facet pairing; None when undecided.

    Decided only for simplicial fans whose maximal cones are all full
    dimensional: complete iff each facet lies in exactly two maximal cones,
    on opposite sides of it, and the cones are connected through facets.
    """
    n = fan.dim
    if not is_simplicial(fan) or any(len(c) != n for c in fan.max_cones):
        return None
    owners: dict[tuple[int, ...], list[int]] = {}
    for k, c in enumerate(fan.max_cones):
        for facet in combinations(c, n - 1):
            owners.setdefault(facet, []).append(k)
    adjacency: dict[int, set[int]] = {k: set() for k in range(len(fan.max_cones))}
    for facet, ks in owners.items():
        if len(ks) != 2:
            return False
        a, b = ks
        sides = []
        for k in ks:
            (apex,) = set(fan.max_cones[k]) - set(facet)
            sides.append(bareiss_det([list(fan.rays[i]) for i in facet] + [list(fan.rays[apex])]))
        if sides[0] * sides[1] >= 0:
            return False
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for nb in adjacency[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(fan.max_cones)


def positive_relation(fan: Fan) -> tuple[int, ...]:
    """Integers ``lam_i > 0`` with ``sum lam_i v_i = 0``.

    Found by locating each ``-v_i`` in a maximal cone; needs a complete fan
    with simplicial full-dimensional cones.
    """
    total = [Fraction(0)] * fan.n_rays
    for i, v in enumerate(fan.rays):
        target = [-x for x in v]
        for c in fan.max_cones:
            coeffs = _solve_rational([fan.rays[j] for j in c], target)
            if coeffs is not None and all(x >= 0 for x in coeffs):
                total[i] += 1
                for j, x in zip(c, coeffs):
                    total[j] += x
                break
        else:
            raise ValueError(f"-v_{i} lies in no simplicial maximal cone")
    den = 1
    for x in total:
        den = den * x.denominator // gcd(den, x.denominator)
    lam = [int(x * den) for x in total]
    g = content(lam)
    return tuple(x // g for x in lam)


def _solve_rational(vectors, target):
    # solve sum c_k vectors[k] = target; None unless a unique solution exists
    n = len(target)
    k = len(vectors)
    M = [[Fraction(vectors[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[r], M[piv] = M[piv], M[r]
        M[r] = [x / M[r][c] for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    if any(M[i][k] != 0 for i in range(r, n)):
        return None
    return [M[i][k] for i in range(k)]


# -- builtins -----------------------------------------------------------------

def projective_space(n: int) -> Fan:
    if n < 1:
        raise UnknownBuiltin("projective_space needs n >= 1")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    cones = list(combinations(range(n + 1), n))
    return Fan.from_lists(n, rays, cones, name=f"projective_space({n})")


def hirzebruch(a: int) -> Fan:
    if a < 0:
        raise UnknownBuiltin("hirzebruch needs a >= 0")
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    return Fan.from_lists(2, rays, [(0, 1), (1, 2), (2, 3), (0, 3)], name=f"hirzebruch({a})")


def product_p1_p1() -> Fan:
    rays = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    return Fan.from_lists(2, rays, [(0, 1), (1, 2), (2, 3), (0, 3)], name="product_p1_p1")


def weighted_p112() -> Fan:
    rays = [(1, 0), (0, 1), (-1, -2)]
    return Fan.from_lists(2, rays, [(0, 1), (1, 2), (0, 2)], name="weighted_p112")


def quadric_cone() -> Fan:
    return Fan.from_lists(2, [(1, 1), (1, -1)], [(0, 1)], name="quadric_cone")


_PARAMETRIZED = {"projective_space": projective_space, "hirzebruch": hirzebruch}
_PLAIN = {
    "product_p1_p1": product_p1_p1,
    "weighted_p112": weighted_p112,
    "quadric_cone": quadric_cone,
}


def builtin_fan(name: str) -> Fan:
    """Look up a builtin fan, e.g. ``"projective_space(2)"`` or ``"quadric_cone"``."""
    name = name.strip()
    m = re.fullmatch(r"(\w+)\s*\(\s*(-?\d+)\s*\)", name)
    if m and m.group(1) in _PARAMETRIZED:
        return _PARAMETRIZED[m.group(1)](int(m.group(2)))
    if name in _PLAIN:
        return _PLAIN[name]()
    raise UnknownBuiltin(
        f"unknown builtin {name!r}; expected one of projective_space(n), hirzebruch(a), "
        + ", ".join(_PLAIN)
    )


BUILTIN_NAMES = (
    "projective_space(1)",
    "projective_space(2)",
    "projective_space(3)",
    "product_p1_p1",
    "hirzebruch(0)",
    "hirzebruch(1)",
    "hirzebruch(2)",
    "weighted_p112",
    "quadric_cone",
)
