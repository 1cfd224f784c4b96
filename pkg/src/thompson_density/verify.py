"""Acceptance checks, runnable from the CLI (``verify``) and from pytest.

Each check regenerates its own oracles (brute-force enumeration, direct
formulas) instead of reading fixtures, and returns a :class:`CheckResult`.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import bbsets, cayley, series, words
from .cayley import STANDARD, THREE, build_subgraph, density_report
from .forest import GenLabel, MarkedForest, enumerate_forests, enumerate_marked_forests, enumerate_trees
from .interval import Interval

FIXTURE_WORD = (0, 0, 0, 0, 0, 1, 4, 4, 6, 10, 10, 13, 14, 15)
FIXTURE_FOREST = "(.^.) . ((.^.)^(.^.)) . . ((.^.)^.)* (.^(.^(.^.)))"


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool = False
    details: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} ({self.seconds:.1f}s)"


def worker_count() -> int:
    env = os.environ.get("THOMPSON_DENSITY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# --- oracles ------------------------------------------------------------


def _brute_tree_counts(max_leaves: int, k: int) -> list[int]:
    # trees of height <= k by leaves, from the caret decomposition directly
    counts = {0: [0, 1] + [0] * (max_leaves - 1)}
    for h in range(1, k + 1):
        prev = counts[h - 1]
        cur = [0, 1] + [0] * (max_leaves - 1)
        for s in range(2, max_leaves + 1):
            cur[s] = sum(prev[i] * prev[s - i] for i in range(1, s))
        counts[h] = cur
    return counts[k]


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


# --- criteria -----------------------------------------------------------


def check_enumeration_vs_series() -> CheckResult:
    res = CheckResult(1, "enumeration matches alpha, beta, sigma")
    for k, n_max in ((1, 14), (2, 14), (3, 12)):
        alpha = series.series_alpha(k, n_max)
        beta = series.series_beta(k, n_max)
        sigma = series.series_sigma(k, n_max)
        phi = series.phi_polynomial(k)
        brute = _brute_tree_counts(n_max, k)
        for s in range(1, n_max + 1):
            if not phi[s] == brute[s] == len(enumerate_trees(s, k)):
                res.details.append(f"k={k}: trees with {s} leaves disagree with Phi_k")
        for n in range(1, n_max + 1):
            forests = marked = special = 0
            for trees in enumerate_forests(n, k):
                forests += 1
                marked += len(trees)
                special += sum(bbsets.is_special_at(trees, i, k) for i in range(len(trees) - 4))
            got = (forests, marked, special)
            want = (alpha[n], beta[n], sigma[n])
            if got != want:
                res.details.append(f"k={k} n={n}: enumerated {got} != series {want}")
    res.ok = not res.details
    return res


def check_spot_values() -> CheckResult:
    res = CheckResult(2, "spot values")
    b1 = series.series_beta(1, 3)
    expect = {
        "beta_1(2)": (b1[2], 3, sum(1 for _ in enumerate_marked_forests(2, 1))),
        "beta_1(3)": (b1[3], 7, sum(1 for _ in enumerate_marked_forests(3, 1))),
        "gamma_1(4)": (series.series_gamma(1, 4)[4], 20, _brute_pairs(4, 1)),
        "sigma_2(10)": (series.series_sigma(2, 10)[10], 4, sum(1 for _ in bbsets.find_special_occurrences(10, 2))),
    }
    a1 = series.series_alpha(1, 12)
    for n in range(13):
        expect[f"alpha_1({n})"] = (a1[n], _fib(n + 1), _brute_compositions(n, (1, 2)))
    for name, (value, literal, oracle) in expect.items():
        if not value == literal == oracle:
            res.details.append(f"{name}: series {value}, expected {literal}, brute force {oracle}")
    res.ok = not res.details
    return res


def _brute_compositions(n: int, parts: tuple) -> int:
    if n == 0:
        return 1
    return sum(_brute_compositions(n - p, parts) for p in parts if p <= n)


def _brute_pairs(n: int, k: int) -> int:
    # ordered pairs of (possibly empty) forests with n leaves in total
    def forests(m: int) -> int:
        return 1 if m == 0 else sum(1 for _ in enumerate_forests(m, k))

    return sum(forests(i) * forests(n - i) for i in range(n + 1))


def check_boundary_identities() -> CheckResult:
    res = CheckResult(3, "boundary identities on full BB(n,k)")
    adjudication = set()
    for k in (0, 1, 2):
        alpha = series.series_alpha(k, 12)
        beta = series.series_beta(k, 12)
        gamma = series.series_gamma(k, 12)
        for n in range(1, 13):
            verts = list(enumerate_marked_forests(n, k))
            for gens in (STANDARD, THREE):
                g = build_subgraph(verts, gens, k)
                rep = density_report(g)
                c = rep.external_by_label
                tag = f"k={k} n={n} {gens.name}"
                if not c[GenLabel.X0] == c[GenLabel.X0_INV] == alpha[n]:
                    res.details.append(f"{tag}: x0 boundary {c[GenLabel.X0]}/{c[GenLabel.X0_INV]} != alpha {alpha[n]}")
                if c[GenLabel.X1] != c[GenLabel.X1_INV]:
                    res.details.append(f"{tag}: x1 boundary not symmetric")
                adjudication.add(bbsets.adjudicate_x1_boundary(n, k, c[GenLabel.X1]))
                if c[GenLabel.X1] != gamma[n - 1]:
                    res.details.append(f"{tag}: x1 boundary {c[GenLabel.X1]} != gamma(n-1) {gamma[n - 1]}")
                if gens is THREE and not c[GenLabel.X2] == c[GenLabel.X2_INV] == alpha[n] + beta[n - 1]:
                    res.details.append(f"{tag}: x2 boundary {c[GenLabel.X2]} != alpha+beta(n-1)")
                if rep.density + rep.cheeger != 2 * gens.m:
                    res.details.append(f"{tag}: density + cheeger != 2m")
                if not cayley.symmetric_property_check(g):
                    res.details.append(f"{tag}: symmetric property fails")
    res.ok = not res.details and "neither" not in adjudication and "beta" not in adjudication
    res.details.append(f"x1 boundary matched: {sorted(adjudication)}")
    return res


def check_degree_census() -> CheckResult:
    res = CheckResult(4, "degree census of special triples")
    failures, notes = [], []
    for n in range(10, 15):
        g = build_subgraph(enumerate_marked_forests(n, 2), STANDARD, 2)
        census = bbsets.degree_census_special(n, 2, STANDARD, g)
        bad = {d: c for d, c in census["interior"].items() if d != (2, 3, 2)}
        if bad:
            failures.append(f"n={n}: interior degrees {bad}")
        seen: set = set()
        count = 0
        for occ in bbsets.find_special_occurrences(n, 2):
            seen.update(occ.triple)
            count += 1
        if len(seen) != 3 * count:
            failures.append(f"n={n}: triples overlap ({len(seen)} vertices for {count} occurrences)")
        notes.append(f"n={n}: interior {census['interior']} left edge {census['left_edge']}")
    res.details = failures + notes
    res.ok = not failures
    return res


def check_surgery() -> CheckResult:
    res = CheckResult(5, "surgery cardinality, edge budget and density bound")
    failures = []
    beta = series.series_beta(2, 14)
    sigma = series.series_sigma(2, 14)
    for n in range(1, 15):
        for gens in (STANDARD, THREE):
            full = build_subgraph(enumerate_marked_forests(n, 2), gens, 2)
            acc = bbsets.surgery_edge_accounting(n, 2, gens, full)
            result = bbsets.surgery(n, 2, gens)
            tag = f"n={n} {gens.name}"
            if len(result.vertices) != beta[n] - 3 * sigma[n]:
                failures.append(f"{tag}: |BB'|={len(result.vertices)} != beta-3sigma")
            if acc["removed"] > acc["bound"]:
                failures.append(f"{tag}: removed {acc['removed']} > {acc['bound']}")
            rebuilt = density_report(build_subgraph(result.vertices, gens, 2))
            if rebuilt.internal_directed_edges != acc["internal_after"]:
                failures.append(f"{tag}: rebuilt graph disagrees with accounting")
            bound = bbsets.lower_bound_formula(n, 2, gens)
            if rebuilt.density < bound:
                failures.append(f"{tag}: density {rebuilt.density} < bound {bound}")
            if n >= 12:
                res.details.append(
                    f"{tag}: sigma={sigma[n]} removed={acc['removed']}/{acc['bound']} "
                    f"density={float(rebuilt.density):.6f} bound={float(bound):.6f}"
                )
    res.details = failures + res.details
    res.ok = not failures
    return res


def check_root_certificates() -> CheckResult:
    res = CheckResult(6, "root certificates and inequality chain")
    for k in range(1, 65):
        r = series.xi(k)
        if not (Fraction(r.lo) > Fraction(1, 4) and Fraction(r.hi) < Fraction(1, 4) + Fraction(3, 2 * k)):
            res.details.append(f"k={k}: [{r.lo}, {r.hi}] not inside (1/4, 1/4 + 3/(2k))")
    golden = (Interval.exact(5).sqrt() - 1) / 2
    r1 = series.xi(1)
    err = max(abs(r1.hi - golden.lo), abs(golden.hi - r1.lo))
    if not err <= 1e-12:
        res.details.append(f"xi_1 off golden ratio conjugate by {err}")
    report = series.bound_suite(64)
    if not report.ok:
        res.details.append(f"bound_suite failed at {report.first_failure}")
    res.ok = not res.details
    res.details.append(f"xi_1 enclosure error {err:.3g}")
    return res


def check_headline_numbers() -> CheckResult:
    res = CheckResult(7, "headline limits")
    p = series.p_limit()
    if not p.certainly_gt(Fraction(1, 1200)):
        res.details.append(f"p={p} not > 1/1200")
    gain = (p / 2) / (1 - 3 * p)
    if not gain.certainly_gt(Fraction(1, 2400)):
        res.details.append(f"0.5p/(1-3p)={gain} not > 1/2400")
    t = time.perf_counter()
    bb = series.density_limit_bb_prime(7200)
    t_bb = time.perf_counter() - t
    if not bb.certainly_gt(Fraction(35004, 10000)):
        res.details.append(f"bb_prime(7200)={bb} not > 3.5004")
    t = time.perf_counter()
    th = series.density_limit_thm2(7200)
    t_th = time.perf_counter() - t
    if not th.certainly_gt(Fraction(50008, 10000)):
        res.details.append(f"thm2(7200)={th} not > 5.0008")
    if max(t_bb, t_th) >= 1.0:
        res.details.append(f"limit evaluation too slow: {t_bb:.2f}s, {t_th:.2f}s")
    res.ok = not res.details
    res.details.append(f"p in [{p.lo!r}, {p.hi!r}]")
    res.details.append(f"bb_prime(7200) in [{bb.lo!r}, {bb.hi!r}]")
    res.details.append(f"thm2(7200) in [{th.lo!r}, {th.hi!r}]")
    res.details.append(f"minimal k with bb_prime(k) > 3.5: {series.minimal_k_exceeding(3.5)}")
    res.details.append(
        f"minimal k with thm2(k) > 5: {series.minimal_k_exceeding(5, series.density_limit_thm2)}"
    )
    return res


def check_convergence() -> CheckResult:
    res = CheckResult(8, "coefficient ratio convergence")
    for k in (0, 1, 2):
        b = series.series_beta(k, 60)
        root = series.xi(k).interval
        devs = []
        for n in range(40, 61):
            ratio = Fraction(b[n - 1], b[n])
            # distance from the whole enclosure, so rounding can only make it larger
            devs.append(max(abs(ratio - Fraction(root.lo)), abs(ratio - Fraction(root.hi))))
        if not all(devs[i + 1] < devs[i] for i in range(len(devs) - 1)):
            res.details.append(f"k={k}: ratio deviation not decreasing on [40, 60]")
    s = series.series_sigma(2, 60)
    g = series.series_gamma(2, 60)
    P = series.p_at_xi(2)
    ratio = Fraction(s[60], g[60])
    dev = max(abs(ratio - Fraction(P.lo)), abs(ratio - Fraction(P.hi)))
    if not dev < Fraction(1, 100):
        res.details.append(f"sigma/gamma at n=60 off P(xi_2) by {float(dev)}")
    res.ok = not res.details
    res.details.append(f"|sigma_2(60)/gamma_2(60) - P(xi_2)| = {float(dev):.3g}")
    return res


def check_fixtures() -> CheckResult:
    res = CheckResult(9, "fixture round trip and defining relations")
    expected = MarkedForest.parse(FIXTURE_FOREST)
    got = words.word_to_marked_forest(FIXTURE_WORD, expected.leaves)
    if got != expected:
        res.details.append(f"forward map gave {got}")
    if words.marked_forest_to_word(expected) != FIXTURE_WORD:
        res.details.append("inverse map does not recover the word")
    for n in range(1, 9):
        if not words.verify_defining_relations(n):
            res.details.append(f"defining relations fail at n={n}")
    res.ok = not res.details
    return res


CRITERIA: tuple[Callable[[], CheckResult], ...] = (
    check_enumeration_vs_series,
    check_spot_values,
    check_boundary_identities,
    check_degree_census,
    check_surgery,
    check_root_certificates,
    check_headline_numbers,
    check_convergence,
    check_fixtures,
)


def run_check(fn: Callable[[], CheckResult]) -> CheckResult:
    t = time.perf_counter()
    try:
        res = fn()
    except Exception as exc:  # reported as a failed criterion
        res = CheckResult(CRITERIA.index(fn) + 1, fn.__name__, False, [f"{type(exc).__name__}: {exc}"])
    res.seconds = time.perf_counter() - t
    return res


def run_all(workers: int | None = None) -> list[CheckResult]:
    workers = worker_count() if workers is None else workers
    if workers <= 1:
        return [run_check(fn) for fn in CRITERIA]
    with ProcessPoolExecutor(max_workers=min(workers, len(CRITERIA))) as pool:
        return list(pool.map(run_check, CRITERIA))
