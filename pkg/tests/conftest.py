import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Sieve fixtures with known rational points and their exact expressions in
# the supplied basis (coordinates: free generators first, then torsion in
# listed order). Every expression is re-verified over Q by
# test_sieve.py::test_known_point_expressions_exact before use.
SOUNDNESS_FIXTURES = {
    "e_x3m2_sieve.json": [
        {"point": [[3, 1], [5, 1]], "expression": (1,)},
    ],
    "e_x3p1_sieve.json": [
        {"point": [[2, 1], [3, 1]], "expression": (1,)},
        {"point": [[0, 1], [1, 1]], "expression": (2,)},
        {"point": [[-1, 1], [0, 1]], "expression": (3,)},
    ],
    "e_x3mx_sieve.json": [
        {"point": [[0, 1], [0, 1]], "expression": (1, 0)},
        {"point": [[1, 1], [0, 1]], "expression": (0, 1)},
        {"point": [[-1, 1], [0, 1]], "expression": (1, 1)},
    ],
    "g2_x5p1_sieve.json": [
        # curve points as classes [P - infinity]; (T, D) torsion coordinates
        {"point": {"u": [[1, 1], [1, 1]], "v": []}, "expression": (1, 0)},
        {"point": {"u": [[0, 1], [1, 1]], "v": [[1, 1]]}, "expression": (0, 1)},
        {"point": "identity", "expression": (0, 0)},
    ],
    "g2_case.json": [
        {"point": {"u": [[-1, 1], [1, 1]], "v": [[1, 1]]}, "expression": (1,)},
        {"point": {"u": [[-1, 1], [1, 1]], "v": [[-1, 1]]}, "expression": (-1,)},
        {"point": "identity", "expression": (0,)},
    ],
}


def load_fixture(name):
    with open(FIXTURES / name, "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
