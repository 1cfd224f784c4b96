import json
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from thompson_density.bbsets import adjudicate_x1_boundary, full_bb_internal_edges
from thompson_density.cayley import (
    EXTERNAL,
    STANDARD,
    THREE,
    GeneratorSet,
    build_subgraph,
    boundary_census,
    density_report,
    edge_pairing_check,
    internal_edges_among,
    symmetric_property_check,
)
from thompson_density.forest import GenLabel, MarkedForest, apply_generator, canonical_key, enumerate_marked_forests
from thompson_density.series import series_alpha, series_beta, series_gamma

X0, X0i, X1, X1i, X2, X2i = (
    GenLabel.X0,
    GenLabel.X0_INV,
    GenLabel.X1,
    GenLabel.X1_INV,
    GenLabel.X2,
    GenLabel.X2_INV,
)

SMALL = [(n, k) for k in (1, 2) for n in range(1, 13)]


def bb(n, k, gens=STANDARD):
    return build_subgraph(enumerate_marked_forests(n, k), gens, k)


def accepted(g, v):
    i = g.index_of(MarkedForest.parse(v))
    return {a for a in g.generator_set.labels if g.accepts(i, a)}


class TestGeneratorSet:
    def test_labels(self):
        assert STANDARD.labels == (X0, X0i, X1, X1i)
        assert THREE.m == 3 and THREE.name == "x0x1x2"

    def test_parse(self):
        assert GeneratorSet.parse("x0x1") is STANDARD
        assert GeneratorSet.parse("x0x1x2") is THREE
        with pytest.raises(ValueError):
            GeneratorSet.parse("x1x2")


class TestBuild:
    def test_bb21(self):
        g = bb(2, 1)
        assert len(g) == 3
        assert accepted(g, "(.^.)*") == {X1}
        assert accepted(g, ".* .") == {X0i, X1i}
        assert accepted(g, ". .*") == {X0}

    def test_single_vertex(self):
        g = build_subgraph([MarkedForest.parse(".* .")], THREE)
        r = density_report(g)
        assert r.density == 0 and r.cheeger == 6
        assert symmetric_property_check(g)

    def test_bb31(self):
        g = bb(3, 1)
        r = density_report(g)
        assert r.vertex_count == 7
        assert r.internal_directed_edges == 12
        assert r.density == Fraction(12, 7)

    def test_rejects_mixed_and_empty(self):
        with pytest.raises(ValueError):
            build_subgraph([MarkedForest.parse(".*"), MarkedForest.parse(".* .")])
        with pytest.raises(ValueError):
            build_subgraph([])

    def test_duplicates_collapse(self):
        v = MarkedForest.parse(".* .")
        assert len(build_subgraph([v, v])) == 1

    def test_cap_only_on_caret_adding(self):
        # without a cap the same set gains the x1^-1 edge into a taller tree
        verts = list(enumerate_marked_forests(4, 2)) + list(enumerate_marked_forests(4, 3))
        capped = build_subgraph(verts, STANDARD, 2)
        free = build_subgraph(verts, STANDARD, None)
        assert free.internal_edge_count() > capped.internal_edge_count()

    def test_brute_force_adjacency(self):
        g = bb(6, 2, THREE)
        for i, v in enumerate(g.vertices):
            for a in THREE.labels:
                w = apply_generator(v, a)
                ok = w is not None and all(t.height <= 2 for t in w.trees)
                assert g.accepts(i, a) == ok


class TestInvariants:
    @pytest.mark.parametrize("n,k", SMALL)
    @pytest.mark.parametrize("gens", [STANDARD, THREE], ids=["x0x1", "x0x1x2"])
    def test_graph_invariants(self, n, k, gens):
        g = bb(n, k, gens)
        r = density_report(g)
        assert r.density + r.cheeger == 2 * gens.m
        assert r.external_directed_edges >= r.inner_boundary_size
        assert r.external_directed_edges >= r.outer_boundary_size
        assert symmetric_property_check(g)
        assert edge_pairing_check(g)
        assert r.internal_directed_edges == full_bb_internal_edges(n, k, gens)

    @pytest.mark.parametrize("n,k", SMALL)
    def test_boundary_census(self, n, k):
        g = bb(n, k, THREE)
        c = boundary_census(g)
        alpha, beta, gamma = series_alpha(k, n), series_beta(k, n), series_gamma(k, n)
        assert c[X0] == c[X0i] == alpha[n]
        assert c[X1] == c[X1i] == gamma[n - 1]
        assert adjudicate_x1_boundary(n, k, c[X1]) in ("gamma", "both")
        assert c[X2] == c[X2i] == alpha[n] + beta[n - 1]

    def test_bb21_x0_census(self):
        assert boundary_census(bb(2, 1))[X0] == 2

    def test_explicit_formula_bb31(self):
        assert 4 * 7 - 2 * 3 - 2 * series_gamma(1, 2)[2] == 12

    def test_random_subsets(self):
        rng = random.Random(11)
        verts = list(enumerate_marked_forests(7, 2))
        for _ in range(20):
            sub = rng.sample(verts, rng.randint(1, len(verts)))
            g = build_subgraph(sub, THREE, 2)
            r = density_report(g)
            assert r.density + r.cheeger == 6
            assert r.external_directed_edges >= r.outer_boundary_size
            assert edge_pairing_check(g)


class TestCheckers:
    def test_truncated_adjacency_breaks_symmetry(self):
        g = bb(5, 2)
        row = list(g.targets[X1])
        i = next(j for j, t in enumerate(row) if t != EXTERNAL)
        row[i] = EXTERNAL
        broken = replace(g, targets={**g.targets, X1: tuple(row)})
        assert not symmetric_property_check(broken)
        assert not edge_pairing_check(broken)

    def test_internal_edges_among(self):
        g = bb(5, 2)
        assert internal_edges_among(g, [True] * len(g)) == g.internal_edge_count()
        assert internal_edges_among(g, [False] * len(g)) == 0


class TestExport:
    def test_edge_format(self):
        g = bb(2, 1)
        lines = g.export_edges().splitlines()
        assert len(lines) == 3 * 4
        key = canonical_key(MarkedForest.parse("(.^.)*")).hex()
        assert f"{key}  x1  {canonical_key(MarkedForest.parse('.* .')).hex()}" in lines
        assert f"{key}  x0  EXT" in lines

    def test_report_json(self):
        r = density_report(bb(3, 1))
        d = json.loads(r.dumps())
        assert d["density_exact"] == "12/7"
        assert d["vertex_count"] == 7 and d["m"] == 2
        assert sum(d["external_by_label"].values()) == d["external_directed_edges"]
