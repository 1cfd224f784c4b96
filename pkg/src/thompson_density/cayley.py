"""Induced subgraphs of the left Cayley graph of F on sets of marked forests."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .forest import GenLabel, MarkedForest, apply_generator, canonical_key

EXTERNAL = -1


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[GenLabel, ...]

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def labels(self) -> tuple[GenLabel, ...]:
        """``A^{+-1}``, each generator followed by its inverse."""
        out = []
        for g in self.generators:
            out += [g, g.inverse]
        return tuple(out)

    @property
    def name(self) -> str:
        return "".join(g.value for g in self.generators)

    @classmethod
    def parse(cls, text: str) -> "GeneratorSet":
        if text in ("x0x1", "standard", "2"):
            return STANDARD
        if text in ("x0x1x2", "three", "3"):
            return THREE
        raise ValueError(f"unknown generator set {text!r}; use x0x1 or x0x1x2")


STANDARD = GeneratorSet((GenLabel.X0, GenLabel.X1))
THREE = GeneratorSet((GenLabel.X0, GenLabel.X1, GenLabel.X2))

_CARET_ADDING = (GenLabel.X1_INV, GenLabel.X2_INV)


@dataclass(frozen=True)
class Subgraph:
    """Vertices, and for each label the target index or ``EXTERNAL`` per vertex."""

    vertices: tuple[MarkedForest, ...]
    generator_set: GeneratorSet
    height_cap: Optional[int]
    targets: dict  # GenLabel -> tuple[int, ...]
    outer_boundary_size: int = 0
    index: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def degree(self, i: int) -> int:
        return sum(1 for a in self.generator_set.labels if self.targets[a][i] != EXTERNAL)

    def accepts(self, i: int, a: GenLabel) -> bool:
        return self.targets[a][i] != EXTERNAL

    def index_of(self, v: MarkedForest) -> int:
        return self.index[v]

    def internal_edge_count(self) -> int:
        return sum(1 for a in self.generator_set.labels for t in self.targets[a] if t != EXTERNAL)

    def edges(self) -> Iterable[tuple[int, GenLabel, int]]:
        for a in self.generator_set.labels:
            for i, t in enumerate(self.targets[a]):
                yield i, a, t

    def export_edges(self) -> str:
        """One line per directed edge slot: ``srcKey  label  dstKey|EXT`` (hex keys)."""
        keys = [canonical_key(v).hex() for v in self.vertices]
        lines = []
        for i in range(len(self.vertices)):
            for a in self.generator_set.labels:
                t = self.targets[a][i]
                lines.append(f"{keys[i]}  {a.value}  {keys[t] if t != EXTERNAL else 'EXT'}")
        return "\n".join(lines) + "\n"


def build_subgraph(vertices: Iterable[MarkedForest], gens: GeneratorSet = STANDARD, k: Optional[int] = None) -> Subgraph:
    """Induced subgraph on ``vertices``.

    A slot is internal when the move is defined and lands in the set; both
    undefined moves and moves leaving the set are external.  The height cap
    ``k`` applies to the caret-adding labels only.  The outer boundary counts
    distinct marked forests outside the set reachable by one move, ignoring
    the cap.
    """
    verts: list[MarkedForest] = []
    index: dict[MarkedForest, int] = {}
    for v in vertices:
        if v not in index:
            index[v] = len(verts)
            verts.append(v)
    if not verts:
        raise ValueError("vertex set must be nonempty")
    n = verts[0].leaves
    if any(v.leaves != n for v in verts):
        raise ValueError("all vertices must have the same number of leaves")

    targets = {}
    outside: set[MarkedForest] = set()
    for a in gens.labels:
        cap = k if a in _CARET_ADDING else None
        row = []
        for v in verts:
            w = apply_generator(v, a, cap)
            if w is None:
                if cap is not None:
                    # capped out of the height bound: still a representable neighbour
                    free = apply_generator(v, a)
                    if free is not None and free not in index:
                        outside.add(free)
                row.append(EXTERNAL)
                continue
            j = index.get(w)
            if j is None:
                outside.add(w)
                row.append(EXTERNAL)
            else:
                row.append(j)
        targets[a] = tuple(row)
    return Subgraph(tuple(verts), gens, k, targets, len(outside), index)


@dataclass(frozen=True)
class DensityReport:
    vertex_count: int
    internal_directed_edges: int
    external_directed_edges: int
    external_by_label: dict
    inner_boundary_size: int
    outer_boundary_size: int
    density: Fraction
    cheeger: Fraction
    m: int

    def to_json(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "m": self.m,
            "internal_directed_edges": self.internal_directed_edges,
            "external_directed_edges": self.external_directed_edges,
            "external_by_label": {a.value: c for a, c in self.external_by_label.items()},
            "inner_boundary_size": self.inner_boundary_size,
            "outer_boundary_size": self.outer_boundary_size,
            "density_exact": fraction_str(self.density),
            "density_float": float(self.density),
            "cheeger_exact": fraction_str(self.cheeger),
            "cheeger_float": float(self.cheeger),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def boundary_census(g: Subgraph) -> dict:
    """Number of external directed edges per label."""
    return {a: sum(1 for t in g.targets[a] if t == EXTERNAL) for a in g.generator_set.labels}


def density_report(g: Subgraph) -> DensityReport:
    census = boundary_census(g)
    external = sum(census.values())
    size = len(g.vertices)
    internal = g.internal_edge_count()
    inner = sum(1 for i in range(size) if any(g.targets[a][i] == EXTERNAL for a in g.generator_set.labels))
    return DensityReport(
        vertex_count=size,
        internal_directed_edges=internal,
        external_directed_edges=external,
        external_by_label=census,
        inner_boundary_size=inner,
        outer_boundary_size=g.outer_boundary_size,
        density=Fraction(internal, size),
        cheeger=Fraction(external, size),
        m=g.generator_set.m,
    )


def symmetric_property_check(g: Subgraph) -> bool:
    """Each label has as many external edges as its inverse."""
    census = boundary_census(g)
    return all(census[a] == census[a.inverse] for a in g.generator_set.generators)


def edge_pairing_check(g: Subgraph) -> bool:
    """``v --a--> w`` internal iff ``w --a^-1--> v`` internal."""
    for i, a, t in g.edges():
        if t != EXTERNAL and g.targets[a.inverse][t] != i:
            return False
    return True


def internal_edges_among(g: Subgraph, keep: Sequence[bool]) -> int:
    """Internal directed edges of the subgraph induced on the kept vertices."""
    count = 0
    for i, a, t in g.edges():
        if t != EXTERNAL and keep[i] and keep[t]:
            count += 1
    return count
