"""Acceptance run: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``. All comparisons are exact.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toric_frobenius import (
    BUILTIN_NAMES,
    builtin_fan,
    class_distribution_convolution,
    class_distribution_cube,
    compute_class_group,
    decompose,
    h0,
)
from toric_frobenius.frobenius import ClassDistribution, Decomposition
from toric_frobenius.lattice import IntMatrix, smith_normal_form
from toric_frobenius.verify import (
    check_composition,
    check_h0_identity,
    check_projection_formula,
    check_rank,
    check_trivial_frobenius,
)

from oracles import maximal_minor_gcd

H0_FANS = ["projective_space(1)", "projective_space(2)", "projective_space(3)",
           "hirzebruch(0)", "hirzebruch(1)", "weighted_p112"]


def report(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    capman = _capture.get("manager")
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


_capture = {}


@pytest.fixture(autouse=True)
def _uncaptured(request):
    _capture["manager"] = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _capture.pop("manager", None)


def h0_ells(cg):
    return [2, 3] + ([5] if 5 ** cg.n_rays <= 10 ** 7 else [])


def criterion_1():
    cg = compute_class_group(builtin_fan("projective_space(1)"))
    bad = []
    for ell in range(2, 8):
        dec = decompose(cg, cg.zero(), ell, algorithm="cube")
        if dict(dec.summands) != {cg.element([0]): 1, cg.element([-1]): ell - 1}:
            bad.append(ell)
    report(1, not bad, f"P^1 splitting for ell=2..7, failures {bad}")


def criterion_2():
    start = time.perf_counter()
    cases = failures = 0
    for name in H0_FANS:
        fan = builtin_fan(name)
        cg = compute_class_group(fan)
        grid = cg.classes_in_box(3)
        for ell in h0_ells(cg):
            r = check_h0_identity(fan, ell, grid, cg=cg)
            cases += len(r.cases)
            failures += len(r.failures) + (not r.cases)
    elapsed = time.perf_counter() - start
    report(2, failures == 0 and elapsed < 60,
           f"h0 identity, {cases} cases, {failures} failures, {elapsed:.1f}s")


def criterion_3():
    pairs = mismatches = 0
    for name in BUILTIN_NAMES:
        cg = compute_class_group(builtin_fan(name))
        ell = 1
        while ell ** cg.n_rays <= 10 ** 6:
            if class_distribution_cube(cg, ell) != class_distribution_convolution(cg, ell):
                mismatches += 1
            pairs += 1
            ell += 1
    report(3, mismatches == 0, f"cube vs convolution, {pairs} (fan, ell) pairs, "
                               f"{mismatches} mismatches")


def criterion_4():
    cases = failures = 0
    runs = [(name, ell) for name in H0_FANS
            for ell in h0_ells(compute_class_group(builtin_fan(name)))]
    runs += [("quadric_cone", 2), ("quadric_cone", 3)]
    for name, ell in runs:
        fan = builtin_fan(name)
        cg = compute_class_group(fan)
        r = check_rank(fan, ell, cg.classes_in_box(3), cg=cg)
        cases += len(r.cases)
        failures += len(r.failures)
    report(4, failures == 0, f"rank law, {cases} cases, {failures} failures")


def criterion_5():
    rng = random.Random(5)
    cases = failures = 0
    for name in BUILTIN_NAMES:
        fan = builtin_fan(name)
        cg = compute_class_group(fan)
        grid = cg.classes_in_box(3)
        for ell in (2, 3):
            pairs = [(rng.choice(grid), rng.choice(grid)) for _ in range(100)]
            r = check_projection_formula(fan, ell, pairs, cg=cg)
            cases += len(r.cases)
            failures += len(r.failures)
        r = check_trivial_frobenius(fan, grid, cg=cg)
        cases += len(r.cases)
        failures += len(r.failures)
    report(5, failures == 0, f"projection formula and ell=1, {cases} cases, {failures} failures")


def criterion_6():
    cases = failures = 0
    for name in ["projective_space(1)", "projective_space(2)", "hirzebruch(1)"]:
        fan = builtin_fan(name)
        cg = compute_class_group(fan)
        for ell1, ell2 in [(2, 2), (2, 3), (3, 2)]:
            r = check_composition(fan, ell1, ell2, cg.classes_in_box(2), cg=cg)
            cases += len(r.cases)
            failures += len(r.failures)
    report(6, failures == 0, f"composition, {cases} cases, {failures} failures")


def _smith_ok(A, snf) -> bool:
    if snf.U @ A @ snf.V != snf.S or abs(snf.U.det()) != 1 or abs(snf.V.det()) != 1:
        return False
    S = snf.S
    if any(S[i, j] for i in range(S.rows) for j in range(S.cols) if i != j):
        return False
    diag = [S[i, i] for i in range(min(S.rows, S.cols))]
    nonzero = [d for d in diag if d]
    if diag[:len(nonzero)] != nonzero or any(d < 0 for d in diag):
        return False
    return all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


def criterion_7():
    rng = random.Random(7)
    failures = minor_checks = 0
    for _ in range(500):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        A = IntMatrix.from_rows(rows)
        snf = smith_normal_form(A)
        ok = _smith_ok(A, snf)
        if max(m, n) <= 4:
            minor_checks += 1
            prod = 1
            for d in snf.invariant_factors:
                prod *= d
            ok = ok and prod == maximal_minor_gcd(rows)
        failures += not ok
    report(7, failures == 0,
           f"SNF on 500 random matrices ({minor_checks} minor-gcd checks), {failures} failures")


def criterion_8():
    fan = builtin_fan("projective_space(2)")
    cg = compute_class_group(fan)
    grid = cg.classes_in_box(3)
    dist = class_distribution_cube(cg, 2)
    clean = check_h0_identity(fan, 2, grid, cg=cg, dist=dist).passed
    # bump each multiplicity m(0, c) of the distribution, i.e. all m(E, D) with D - 2E = c
    undetected = []
    for c in dist:
        counts = dict(dist.counts)
        counts[c] += 1
        if check_h0_identity(fan, 2, grid, cg=cg, dist=ClassDistribution(2, counts)).passed:
            undetected.append(c)
    # bump a single m(E, D) for one source D; detectable exactly when h0(E) > 0
    single = missed = 0
    for D in grid:
        for E in decompose(cg, D, 2, dist).summands:
            if h0(fan, cg, E) == 0:
                continue

            def bump(dec, D=D, E=E):
                if dec.source != D:
                    return dec
                s = dict(dec.summands)
                s[E] += 1
                return Decomposition(dec.source, dec.ell, s, dec.torsion_orders)

            single += 1
            missed += check_h0_identity(fan, 2, [D], cg=cg, dist=dist, perturb=bump).passed
    ok = clean and not undetected and not missed
    report(8, ok, f"mutations on P^2 ell=2: {len(dist)} distribution bumps and "
                  f"{single} summand bumps, {len(undetected) + missed} undetected")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(criterion):
    criterion()


if __name__ == "__main__":
    failed = 0
    for criterion in CRITERIA:
        try:
            criterion()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
