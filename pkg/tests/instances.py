"""Seeded random trees, bundles, cuts, and valuations for property tests."""

from __future__ import annotations

import random

from provwb import (
    AbstractionTree,
    Cut,
    Monomial,
    Polynomial,
    ProvenanceBundle,
    TreeNode,
    Valuation,
    validate_cut,
)


def random_tree(rng: random.Random, max_leaves: int = 12) -> AbstractionTree:
    """Random rooted tree with unique names; leaves are l0, l1, ..."""
    counter = {"leaf": 0, "internal": 0}
    n_leaves = rng.randint(1, max_leaves)

    def build(budget: int, depth: int) -> TreeNode:
        if budget == 1 or depth >= 4 or rng.random() < 0.25:
            name = f"l{counter['leaf']}"
            counter["leaf"] += 1
            return TreeNode(name)
        n_children = rng.randint(1, min(4, budget))
        # split the leaf budget among children, each at least one leaf
        splits = sorted(rng.sample(range(1, budget), n_children - 1)) if n_children > 1 else []
        shares = [b - a for a, b in zip([0] + splits, splits + [budget])]
        children = tuple(build(share, depth + 1) for share in shares)
        if len(children) == 1 and children[0].is_leaf and rng.random() < 0.5:
            return children[0]
        name = f"g{counter['internal']}"
        counter["internal"] += 1
        return TreeNode(name, children)

    root = build(n_leaves, 0)
    if root.is_leaf:  # ensure the root is internal often enough to be interesting
        name = f"g{counter['internal']}"
        root = TreeNode(name, (root,))
    return AbstractionTree(root)


def random_bundle(
    rng: random.Random,
    tree: AbstractionTree,
    max_monomials: int = 60,
    n_keys: int = 3,
    positive: bool = False,
    max_exponent: int = 3,
) -> ProvenanceBundle:
    """Bundle whose monomials contain at most one tree leaf each."""
    free_vars = ["m1", "m2", "m3", "ctx"]
    leaves = list(tree.leaves)
    polys = []
    n_polys = rng.randint(1, n_keys)
    remaining = rng.randint(0, max_monomials)
    for i in range(n_polys):
        take = rng.randint(0, max(0, remaining // (n_polys - i))) if n_polys - i > 1 else remaining
        remaining -= take
        monomials = []
        for _ in range(take):
            c = rng.uniform(0.5, 5.0) if positive else rng.uniform(-5.0, 5.0)
            if abs(c) < 0.01:
                c = 0.01
            factors = []
            if rng.random() < 0.85:
                factors.append((rng.choice(leaves), rng.randint(1, max_exponent)))
            for var in rng.sample(free_vars, rng.randint(0, 2)):
                factors.append((var, rng.randint(1, max_exponent)))
            monomials.append(Monomial.make(c, factors))
        polys.append(Polynomial.make(f"k{i}", monomials))
    return ProvenanceBundle.make(polys)


def random_cut(rng: random.Random, tree: AbstractionTree) -> Cut:
    names: list[str] = []

    def walk(node) -> None:
        if node.is_leaf or rng.random() < 0.4:
            names.append(node.name)
        else:
            for child in node.children:
                walk(child)

    walk(tree.root)
    return validate_cut(tree, names)


def random_valuation(rng: random.Random, names, lo: float = -2.0, hi: float = 2.0) -> Valuation:
    assignments = {name: rng.uniform(lo, hi) for name in names if rng.random() < 0.8}
    return Valuation(assignments, rng.uniform(lo, hi))
