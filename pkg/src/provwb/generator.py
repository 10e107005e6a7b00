"""Synthetic telephony provenance: revenue-per-zip polynomials at scale.

Mirrors the running demo domain: customers subscribe to calling plans,
call durations are totaled per month, and the revenue query
``SUM(duration * price_per_minute) GROUP BY zip`` yields one polynomial
per zip whose monomials are coefficient * plan_var * month_var.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Monomial, Polynomial, ProvenanceBundle, Valuation
from .errors import ValidationError
from .tree import AbstractionTree, TreeNode

# Plan catalog: plan name -> provenance variable (a leaf of the plans tree).
PLAN_VARS: dict[str, str] = {
    "A": "p1",
    "B": "p2",
    "F1": "f1",
    "F2": "f2",
    "Y1": "y1",
    "Y2": "y2",
    "Y3": "y3",
    "V": "v",
    "SB1": "b1",
    "SB2": "b2",
}

_PLANS = tuple(PLAN_VARS)


def plans_tree() -> AbstractionTree:
    """The plans abstraction tree: business / special / standard groups."""
    return AbstractionTree(
        TreeNode(
            "Plans",
            (
                TreeNode(
                    "Business",
                    (TreeNode("SB", (TreeNode("b1"), TreeNode("b2"))), TreeNode("e")),
                ),
                TreeNode(
                    "Special",
                    (
                        TreeNode("F", (TreeNode("f1"), TreeNode("f2"))),
                        TreeNode("Y", (TreeNode("y1"), TreeNode("y2"), TreeNode("y3"))),
                        TreeNode("v"),
                    ),
                ),
                TreeNode("Standard", (TreeNode("p1"), TreeNode("p2"))),
            ),
        )
    )


class SplitMix64:
    """SplitMix64: portable 64-bit PRNG (Steele, Lea & Flood 2014).

    Chosen over the stdlib generator so that a bundle is reproducible
    from (algorithm, seed) alone in any implementation language.
    """

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]; modulo bias is irrelevant here."""
        return lo + self.next_u64() % (hi - lo + 1)


@dataclass(frozen=True)
class GenConfig:
    customers: int
    months: int
    zips: int
    seed: int = 0
    duration_range: tuple[int, int] = (50, 1200)

    def validate(self) -> None:
        if self.customers < 1 or self.months < 1 or self.zips < 1:
            raise ValidationError("customers, months and zips must all be ≥ 1")
        if self.months > 12:
            raise ValidationError("months must be ≤ 12")
        lo, hi = self.duration_range
        if lo < 1 or hi < lo:
            raise ValidationError(f"bad duration range [{lo}, {hi}]")


def generate(config: GenConfig) -> tuple[ProvenanceBundle, AbstractionTree, Valuation]:
    """Deterministic bundle + plans tree + all-ones baseline valuation.

    Prices per (plan, month) are uniform in [0.05, 0.50] rounded to cents;
    each customer gets a uniform plan and zip, and a uniform duration per
    month.  The coefficient of (zip, plan, month) sums duration * price.
    """
    config.validate()
    rng = SplitMix64(config.seed)

    prices = {
        (plan, month): rng.next_int(5, 50) / 100.0
        for plan in _PLANS
        for month in range(1, config.months + 1)
    }
    dlo, dhi = config.duration_range
    coeffs: dict[tuple[int, str, int], float] = {}
    for _ in range(config.customers):
        plan = _PLANS[rng.next_int(0, len(_PLANS) - 1)]
        zip_idx = rng.next_int(0, config.zips - 1)
        for month in range(1, config.months + 1):
            duration = rng.next_int(dlo, dhi)
            cell = (zip_idx, plan, month)
            coeffs[cell] = coeffs.get(cell, 0.0) + duration * prices[(plan, month)]

    by_zip: dict[int, list[Monomial]] = {}
    for (zip_idx, plan, month), c in sorted(coeffs.items()):
        by_zip.setdefault(zip_idx, []).append(
            Monomial.make(c, [(PLAN_VARS[plan], 1), (f"m{month}", 1)])
        )
    polys = [
        Polynomial.make(str(10001 + zip_idx), monomials)
        for zip_idx, monomials in sorted(by_zip.items())
    ]
    return ProvenanceBundle.make(polys), plans_tree(), Valuation({}, 1.0)


# ---------------------------------------------------------------------------
# The hand-sized telephony instance (7 customers, months 1 and 3) that the
# demo walkthrough starts from; built from the literal tables, not the RNG.

_MICRO_CUSTOMERS = {
    # customer id -> (plan variable, zip)
    1: ("p1", "10001"),
    2: ("f1", "10001"),
    3: ("b1", "10002"),
    4: ("y1", "10001"),
    5: ("v", "10001"),
    6: ("e", "10002"),
    7: ("b2", "10002"),
}
_MICRO_DURATIONS = {
    # (customer id, month) -> minutes
    (1, 1): 522, (2, 1): 364, (3, 1): 779, (4, 1): 253,
    (5, 1): 168, (6, 1): 1044, (7, 1): 697,
    (1, 3): 480, (2, 3): 327, (3, 3): 805, (4, 3): 290,
    (5, 3): 121, (6, 3): 1130, (7, 3): 671,
}
_MICRO_PRICES = {
    # (plan variable, month) -> price per minute
    ("p1", 1): 0.4, ("f1", 1): 0.35, ("y1", 1): 0.3, ("v", 1): 0.25,
    ("b1", 1): 0.1, ("b2", 1): 0.1, ("e", 1): 0.05,
    ("p1", 3): 0.5, ("f1", 3): 0.35, ("y1", 3): 0.25, ("v", 3): 0.2,
    ("b1", 3): 0.1, ("b2", 3): 0.15, ("e", 3): 0.05,
}


def telephony_micro_instance() -> tuple[ProvenanceBundle, AbstractionTree, Valuation]:
    """The two-polynomial micro instance used throughout tests and demos."""
    by_zip: dict[str, list[Monomial]] = {}
    for cust, (plan_var, zip_code) in _MICRO_CUSTOMERS.items():
        for month in (1, 3):
            coeff = _MICRO_DURATIONS[(cust, month)] * _MICRO_PRICES[(plan_var, month)]
            by_zip.setdefault(zip_code, []).append(
                Monomial.make(coeff, [(plan_var, 1), (f"m{month}", 1)])
            )
    polys = [Polynomial.make(key, ms) for key, ms in sorted(by_zip.items())]
    return ProvenanceBundle.make(polys), plans_tree(), Valuation({}, 1.0)
