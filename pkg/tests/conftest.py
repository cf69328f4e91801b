import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from modalrisk.frame import DenseRelation, Frame, build_finite_frame  # noqa: E402

LIQUIDITY_DOC = {
    "worlds": ["w0", "w1"],
    "relations": {"K": [[1, 0.6], [0, 1]], "B": [[0, 1], [0, 1]]},
    "propositions": {"r": [0, 0.9]},
}

CONTAGION_DOC = {
    "worlds": ["w0", "w1", "w2"],
    "relations": {"B": [[0, 1, 1], [0, 1, 1], [0, 1, 1]], "K": [[1, 1, 1]] * 3},
    "propositions": {"p": [0, 1, 1]},
}


@pytest.fixture
def liquidity():
    return build_finite_frame(LIQUIDITY_DOC)


@pytest.fixture
def contagion():
    return build_finite_frame(CONTAGION_DOC)


def two_world(row0, row1=(0, 1), std="M", **props):
    return Frame(("w0", "w1"), {std: DenseRelation([list(row0), list(row1)])},
                 {k: np.asarray(v, dtype=float) for k, v in props.items()})


ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {n}. {name}: {detail}")
