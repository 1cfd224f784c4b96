"""Finite subgraphs of the Cayley graph of Thompson's group F.

Marked binary forests as vertices, Belk-Brown sets and their surgery,
generating functions for their sizes, and certified limit densities.
"""

from .cayley import STANDARD, THREE, GeneratorSet, build_subgraph, density_report
from .forest import GenLabel, MarkedForest, Tree, apply_generator, catalan, enumerate_marked_forests, enumerate_trees
from .series import (
    density_limit_bb,
    density_limit_bb_prime,
    density_limit_thm2,
    phi_eval,
    phi_polynomial,
    series_alpha,
    series_beta,
    series_gamma,
    series_sigma,
    xi,
)
from .words import marked_forest_to_word, normalize, word_to_marked_forest

__version__ = "0.1.0"
