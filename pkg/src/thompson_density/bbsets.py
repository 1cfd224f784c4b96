"""Belk-Brown sets BB(n, k), special forests and the surgery sets BB'/BB''.

A marked forest is special when, counting from the marked tree ``T0``:
``T0`` and ``T2`` are trivial, ``T1`` and ``T3`` have height exactly ``k`` and
``T4`` exists and is nontrivial.  Each one gives three vertices ``a``, ``b``,
``c`` (marker on ``T0``, ``T1``, ``T2``) of low degree; removing all of them
raises the density of BB(n, k).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .cayley import (
    STANDARD,
    THREE,
    DensityReport,
    GeneratorSet,
    Subgraph,
    build_subgraph,
    density_report,
    fraction_str,
    internal_edges_among,
)
from .forest import GenLabel, MarkedForest, Tree, enumerate_forests, enumerate_marked_forests
from .series import series_alpha, series_beta, series_gamma, series_sigma


def bb_set(n: int, k: int) -> list[MarkedForest]:
    return list(enumerate_marked_forests(n, k))


def is_special_at(trees: tuple[Tree, ...], i: int, k: int) -> bool:
    if i < 0 or i + 4 >= len(trees):
        return False
    t0, t1, t2, t3, t4 = trees[i : i + 5]
    return t0.left is None and t2.left is None and t1.height == k and t3.height == k and t4.left is not None


@dataclass(frozen=True)
class SpecialOccurrence:
    trees: tuple[Tree, ...]
    position: int

    @property
    def a(self) -> MarkedForest:
        return MarkedForest(self.trees, self.position)

    @property
    def b(self) -> MarkedForest:
        return MarkedForest(self.trees, self.position + 1)

    @property
    def c(self) -> MarkedForest:
        return MarkedForest(self.trees, self.position + 2)

    @property
    def triple(self) -> tuple[MarkedForest, MarkedForest, MarkedForest]:
        return self.a, self.b, self.c

    @property
    def at_left_edge(self) -> bool:
        return self.position == 0

    def to_json(self) -> dict:
        return {"forest": str(self.a), "position": self.position}


def find_special_occurrences(n: int, k: int) -> Iterator[SpecialOccurrence]:
    """Every (forest, position) pair in BB(n, k) matching the special pattern."""
    if k < 1:
        raise ValueError("special forests need k >= 1")
    for trees in enumerate_forests(n, k):
        for i in range(len(trees) - 4):
            if is_special_at(trees, i, k):
                yield SpecialOccurrence(trees, i)


def is_special(v: MarkedForest, k: int) -> bool:
    return is_special_at(v.trees, v.marker, k)


@dataclass(frozen=True)
class SurgeryResult:
    n: int
    k: int
    generator_set: GeneratorSet
    vertices: tuple[MarkedForest, ...]
    occurrences: int
    removed_vertices: int
    removed_edge_bound: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "gens": self.generator_set.name,
            "sigma": self.occurrences,
            "vertices_removed": self.removed_vertices,
            "vertices_kept": len(self.vertices),
            "removed_edge_bound": self.removed_edge_bound,
        }


def edges_per_triple(gens: GeneratorSet) -> int:
    """Directed edges lost per removed triple: 10 over {x0,x1}, 14 over {x0,x1,x2}."""
    return 10 if gens.m == 2 else 14


def surgery(n: int, k: int, gens: GeneratorSet = STANDARD) -> SurgeryResult:
    """BB(n, k) minus the vertices a, b, c of every special occurrence."""
    removed: set[MarkedForest] = set()
    sigma = 0
    for occ in find_special_occurrences(n, k):
        sigma += 1
        removed.update(occ.triple)
    kept = tuple(v for v in enumerate_marked_forests(n, k) if v not in removed)
    return SurgeryResult(n, k, gens, kept, sigma, len(removed), edges_per_triple(gens) * sigma)


def surgery_edge_accounting(n: int, k: int, gens: GeneratorSet = STANDARD, full: Optional[Subgraph] = None) -> dict:
    """Internal directed edges before and after removing all special triples."""
    if full is None:
        full = build_subgraph(enumerate_marked_forests(n, k), gens, k)
    keep = [True] * len(full)
    sigma = 0
    for occ in find_special_occurrences(n, k):
        sigma += 1
        for v in occ.triple:
            keep[full.index_of(v)] = False
    before = full.internal_edge_count()
    after = internal_edges_among(full, keep)
    return {
        "sigma": sigma,
        "internal_before": before,
        "internal_after": after,
        "removed": before - after,
        "bound": edges_per_triple(gens) * sigma,
    }


def degree_census_special(n: int, k: int, gens: GeneratorSet = STANDARD, full: Optional[Subgraph] = None) -> dict:
    """Degrees of a, b, c in the full BB(n, k) graph for every occurrence.

    Returns the multiset of ``(deg a, deg b, deg c)`` separately for
    interior occurrences and for those whose ``T0`` is the leftmost tree.
    """
    if full is None:
        full = build_subgraph(enumerate_marked_forests(n, k), gens, k)
    interior: Counter = Counter()
    left_edge: Counter = Counter()
    for occ in find_special_occurrences(n, k):
        degs = tuple(full.degree(full.index_of(v)) for v in occ.triple)
        (left_edge if occ.at_left_edge else interior)[degs] += 1
    return {"interior": dict(interior), "left_edge": dict(left_edge)}


def lower_bound_formula(n: int, k: int, gens: GeneratorSet) -> Fraction:
    """Density lower bound for BB'(n, k) from series counts and the edge budget.

    The x1 boundary term is ``gamma_k(n-1)``, the number of vertices whose
    marked tree is trivial.
    """
    N = max(n, 1)
    alpha, beta = series_alpha(k, N), series_beta(k, N)
    gamma, s = series_gamma(k, N), series_sigma(k, N)[n]
    if gens.m == 2:
        num = 4 * beta[n] - 2 * alpha[n] - 2 * gamma[n - 1] - 10 * s
    else:
        num = 6 * beta[n] - 4 * alpha[n] - 2 * gamma[n - 1] - 2 * beta[n - 1] - 14 * s
    return Fraction(num, beta[n] - 3 * s)


def full_bb_internal_edges(n: int, k: int, gens: GeneratorSet) -> int:
    """Internal directed edges of BB(n, k) predicted from the series."""
    N = max(n, 1)
    alpha, beta, gamma = series_alpha(k, N), series_beta(k, N), series_gamma(k, N)
    if gens.m == 2:
        return 4 * beta[n] - 2 * alpha[n] - 2 * gamma[n - 1]
    return 6 * beta[n] - 4 * alpha[n] - 2 * gamma[n - 1] - 2 * beta[n - 1]


def density_bb_prime(n: int, k: int, gens: GeneratorSet = STANDARD) -> tuple[DensityReport, SurgeryResult, Fraction]:
    """Exact density of the surgered set together with the formula bound."""
    result = surgery(n, k, gens)
    report = density_report(build_subgraph(result.vertices, gens, k))
    return report, result, lower_bound_formula(n, k, gens)


def surgery_json(n: int, k: int, gens: GeneratorSet = STANDARD) -> dict:
    report, result, bound = density_bb_prime(n, k, gens)
    return {
        "n": n,
        "k": k,
        "gens": gens.name,
        "beta": series_beta(k, n)[n],
        "sigma": result.occurrences,
        "vertices_removed": result.removed_vertices,
        "density_exact": fraction_str(report.density),
        "density_float": float(report.density),
        "lower_bound_formula_exact": fraction_str(bound),
        "lower_bound_formula_float": float(bound),
        "surgery": result.to_json(),
        "report": report.to_json(),
    }


def adjudicate_x1_boundary(n: int, k: int, census_x1: int) -> str:
    """Which series coefficient the measured x1 boundary count equals."""
    N = max(n, 1)
    g = series_gamma(k, N)[n - 1]
    b = series_beta(k, N)[n - 1]
    if census_x1 == g and census_x1 == b:
        return "both"
    if census_x1 == g:
        return "gamma"
    if census_x1 == b:
        return "beta"
    return "neither"


def marked_height_fraction(n: int, k: int) -> Fraction:
    """Fraction of BB(n, k) vertices whose marked tree has height exactly ``k``."""
    total = hit = 0
    for v in enumerate_marked_forests(n, k):
        total += 1
        hit += v.marked_tree.height == k
    return Fraction(hit, total)


__all__ = [
    "GenLabel",
    "STANDARD",
    "THREE",
    "SpecialOccurrence",
    "SurgeryResult",
    "adjudicate_x1_boundary",
    "bb_set",
    "degree_census_special",
    "density_bb_prime",
    "find_special_occurrences",
    "full_bb_internal_edges",
    "is_special",
    "lower_bound_formula",
    "marked_height_fraction",
    "surgery",
    "surgery_edge_accounting",
    "surgery_json",
]
