from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from stablefrag.harness.figure import figure_tree, figure_weights

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fig_tree():
    return figure_tree()


@pytest.fixture
def fig_weights():
    return figure_weights()


def golden_column(name: str, column: str) -> list[int]:
    import csv

    with open(GOLDEN / name, encoding="utf-8") as fh:
        return [int(row[column]) for row in csv.DictReader(fh)]
