import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from provwb import telephony_micro_instance


@pytest.fixture(scope="session")
def micro():
    """(bundle, tree, baseline) of the two-polynomial telephony instance."""
    return telephony_micro_instance()


@pytest.fixture(scope="session")
def micro_bundle(micro):
    return micro[0]


@pytest.fixture(scope="session")
def plans(micro):
    return micro[1]


# Hand-written text fixture matching how the two result polynomials print.
TELEPHONY_TEXT = """\
# key: 10001
208.8*p1*m1 + 240*p1*m3 + 127.4*f1*m1 + 114.45*f1*m3 + 75.9*y1*m1 + 72.5*y1*m3 + 42*v*m1 + 24.2*v*m3
# key: 10002
77.9*b1*m1 + 80.5*b1*m3 + 52.2*e*m1 + 56.5*e*m3 + 69.7*b2*m1 + 100.65*b2*m3
"""

# Expected canonical coefficients, keyed by (poly key, frozenset of factors).
P1_COEFFS = {
    ("p1", "m1"): 208.8,
    ("p1", "m3"): 240.0,
    ("f1", "m1"): 127.4,
    ("f1", "m3"): 114.45,
    ("y1", "m1"): 75.9,
    ("y1", "m3"): 72.5,
    ("v", "m1"): 42.0,
    ("v", "m3"): 24.2,
}
P2_COEFFS = {
    ("b1", "m1"): 77.9,
    ("b1", "m3"): 80.5,
    ("e", "m1"): 52.2,
    ("e", "m3"): 56.5,
    ("b2", "m1"): 69.7,
    ("b2", "m3"): 100.65,
}


def coeff_map(poly):
    """{frozenset of variable names: coefficient} for exponent-1 polynomials."""
    out = {}
    for m in poly.monomials:
        assert all(e == 1 for _, e in m.factors)
        out[frozenset(n for n, _ in m.factors)] = m.coefficient
    return out
