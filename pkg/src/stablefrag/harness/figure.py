"""The 17-vertex worked example: tree, edge weights and the paths derived
from them, rendered as CSV tables."""
from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..fragmentation import ladder_components, ranked_masses
from ..gwtree import PlaneTree, lukasiewicz_of, tree_from_children
from ..prim import frag_prim_path, prim_order, prim_path

__all__ = [
    "FIGURE_CHILDREN",
    "FIGURE_WEIGHTS",
    "FIGURE_THRESHOLD",
    "figure_tree",
    "figure_weights",
    "figure_tables",
    "write_figure",
]

# Depth-first child counts of the example tree.
FIGURE_CHILDREN = (3, 2, 0, 3, 0, 0, 0, 1, 0, 4, 0, 1, 2, 0, 0, 0, 0)
# Parent-edge weights of depth-first vertices 1..16.
FIGURE_WEIGHTS = (
    0.70, 0.59, 0.98, 0.38, 0.12, 0.25, 0.77, 0.43,
    0.93, 0.88, 0.29, 0.31, 0.62, 0.17, 0.81, 0.55,
)
FIGURE_THRESHOLD = 0.92


def figure_tree() -> PlaneTree:
    return tree_from_children(FIGURE_CHILDREN)


def figure_weights() -> np.ndarray:
    return np.concatenate([[0.0], FIGURE_WEIGHTS])


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def figure_tables() -> dict[str, str]:
    """CSV text keyed by file name: tree.csv, paths.csv, masses.csv."""
    tree = figure_tree()
    w = figure_weights()
    order = prim_order(tree, w)
    lex = lukasiewicz_of(tree)
    prim = prim_path(tree, w, order).values
    frag = frag_prim_path(tree, w, FIGURE_THRESHOLD, order).values
    masses = ranked_masses(ladder_components(frag), tree.n)
    tree_rows = [
        (v, int(tree.parent[v]) if v else "", int(tree.children[v]), f"{w[v]:.2f}" if v else "", int(order.rank[v]))
        for v in range(tree.n)
    ]
    path_rows = [(k, int(lex[k]), int(prim[k]), int(frag[k])) for k in range(tree.n + 1)]
    mass_rows = [(i + 1, int(s), str(Fraction(int(s), tree.n))) for i, s in enumerate(masses.sizes)]
    return {
        "tree.csv": _csv(("vertex", "parent", "children", "weight", "prim_rank"), tree_rows),
        "paths.csv": _csv(("k", "W_lex", "W_prim", "W_frag"), path_rows),
        "masses.csv": _csv(("rank", "size", "mass"), mass_rows),
    }


def write_figure(directory) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in figure_tables().items():
        p = d / name
        p.write_text(text, encoding="utf-8")
        written.append(p)
    return written
