"""Optimal cut selection: keep compressed size under a bound while
maximizing the number of meta-variables.

Two monomials merged under one cut node collapse iff their signatures
(result key, non-tree factor context, tree-variable exponent) coincide, so
each node's contribution to the compressed size is the number of distinct
signatures among its descendant leaves.  A bottom-up DP over the tree with
min-plus convolution of child frontiers finds, for every cut cardinality,
the minimum achievable size; the answer is the largest cardinality whose
minimum fits the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

from .core import ProvenanceBundle, bundle_size
from .errors import ValidationError
from .tree import (
    AbstractionTree,
    Cut,
    TreeNode,
    _check_name_collisions,
    _tree_factor,
    apply_abstraction,
    cut_mapping,
    validate_cut,
)

BRUTE_FORCE_CUT_GUARD = 10**6

Frontier = dict[int, int]  # cut cardinality within subtree -> min size


def compute_counts(
    bundle: ProvenanceBundle, tree: AbstractionTree
) -> tuple[dict[str, int], int]:
    """Distinct-signature count per tree node, plus the base size.

    The base size counts monomials containing no tree leaf; no cut
    affects them.
    """
    _check_name_collisions(bundle, tree)
    leaf_sigs: dict[str, set] = {leaf: set() for leaf in tree.leaves}
    base_size = 0
    leaf_set = tree.leaf_set
    for poly in bundle.polynomials:
        for m in poly.monomials:
            hit = _tree_factor(m, leaf_set, poly.key)
            if hit is None:
                base_size += 1
                continue
            name, exp = hit
            context = tuple((n, e) for n, e in m.factors if n != name)
            leaf_sigs[name].add((poly.key, context, exp))

    counts: dict[str, int] = {}

    def visit(node: TreeNode) -> set:
        if node.is_leaf:
            sigs = leaf_sigs[node.name]
        else:
            sigs = set()
            for child in node.children:
                sigs |= visit(child)
        counts[node.name] = len(sigs)
        return sigs

    visit(tree.root)
    return counts, base_size


@dataclass
class OptimizerDiagnostics:
    """Intermediate DP state: what the computation looked like."""

    counts: dict[str, int]
    base_size: int
    frontiers: dict[str, Frontier]  # min size with at least k cut nodes
    splits: dict[str, list[int]]  # chosen per-child cardinalities
    min_size: int  # size of the {root} cut, the floor for any bound
    full_size: int


@dataclass
class AbstractionResult:
    cut: Cut
    mapping: dict[str, str]
    compressed: ProvenanceBundle
    size: int
    expressiveness: int
    base_size: int
    feasible: bool
    bound: int
    free_variables: tuple[str, ...] = ()
    diagnostics: OptimizerDiagnostics | None = None

    def to_obj(self) -> dict:
        return {
            "feasible": self.feasible,
            "bound": self.bound,
            "cut": list(self.cut.nodes),
            "size": self.size,
            "expressiveness": self.expressiveness,
            "base_size": self.base_size,
            "mapping": dict(sorted(self.mapping.items())),
            "distinct_variables": self.expressiveness + len(self.free_variables),
        }


def _convolve(a: Frontier, b: Frontier) -> Frontier:
    out: Frontier = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            v = va + vb
            if v < out.get(k, math.inf):
                out[k] = v
    return out


class _DP:
    """Exact frontiers plus suffix tables for deterministic backtracking."""

    def __init__(self, tree: AbstractionTree, counts: dict[str, int]):
        self.tree = tree
        self.counts = counts
        self.exact: dict[str, Frontier] = {}
        # per internal node: suffix[j] = convolution of children j.. frontiers
        self.suffixes: dict[str, list[Frontier]] = {}
        self._build(tree.root)

    def _build(self, node: TreeNode) -> None:
        if node.is_leaf:
            self.exact[node.name] = {1: self.counts[node.name]}
            return
        for child in node.children:
            self._build(child)
        suffix: list[Frontier] = [self.exact[node.children[-1].name]]
        for child in reversed(node.children[:-1]):
            suffix.append(_convolve(self.exact[child.name], suffix[-1]))
        suffix.reverse()
        self.suffixes[node.name] = suffix
        frontier = {k: v for k, v in suffix[0].items() if k >= 2}
        frontier[1] = self.counts[node.name]
        self.exact[node.name] = frontier

    def monotone(self, name: str) -> Frontier:
        """Min size using at least k cut nodes; non-decreasing in k."""
        exact = self.exact[name]
        out: Frontier = {}
        best = math.inf
        for k in sorted(exact, reverse=True):
            best = min(best, exact[k])
            out[k] = int(best)
        return dict(sorted(out.items()))

    def reconstruct(self, k: int) -> tuple[list[str], dict[str, list[int]]]:
        """Cut of cardinality k achieving exact[root][k].

        Ties among minimal-size splits give the largest cardinality to the
        earliest child, recursively, so the result is deterministic.
        """
        cut: list[str] = []
        splits: dict[str, list[int]] = {}

        def walk(node: TreeNode, k: int) -> None:
            if k == 1:
                cut.append(node.name)
                return
            suffix = self.suffixes[node.name]
            children = node.children
            split: list[int] = []
            remaining = k
            for j, child in enumerate(children[:-1]):
                child_exact = self.exact[child.name]
                target = suffix[j][remaining]
                chosen = None
                for kc in sorted(child_exact, reverse=True):
                    rest = suffix[j + 1].get(remaining - kc, math.inf)
                    if child_exact[kc] + rest == target:
                        chosen = kc
                        break
                assert chosen is not None, "inconsistent DP tables"
                split.append(chosen)
                remaining -= chosen
            split.append(remaining)
            splits[node.name] = split
            for child, kc in zip(children, split):
                walk(child, kc)

        walk(self.tree.root, k)
        return cut, splits


def optimize(bundle: ProvenanceBundle, tree: AbstractionTree, bound: int) -> AbstractionResult:
    """Cut with maximum cardinality whose compressed size fits the bound.

    Ties on cardinality resolve to minimum size, then to the deterministic
    reconstruction order.  If even the {root} cut exceeds the bound the
    result is flagged infeasible and carries the {root} cut for diagnosis.
    """
    if bound < 1:
        raise ValidationError("bound must be ≥ 1")
    counts, base_size = compute_counts(bundle, tree)
    dp = _DP(tree, counts)
    root_exact = dp.exact[tree.root.name]

    feasible_ks = [k for k, v in root_exact.items() if v + base_size <= bound]
    if feasible_ks:
        k_best = max(feasible_ks)
        cut_names, splits = dp.reconstruct(k_best)
        feasible = True
    else:
        cut_names, splits = [tree.root.name], {}
        feasible = False

    cut = validate_cut(tree, cut_names)
    mapping = cut_mapping(tree, cut)
    compressed = apply_abstraction(bundle, tree, cut)
    size = sum(counts[n] for n in cut.nodes) + base_size
    free_vars = tuple(sorted(bundle.variables - tree.leaf_set))

    diagnostics = OptimizerDiagnostics(
        counts=counts,
        base_size=base_size,
        frontiers={name: dp.monotone(name) for name in tree.preorder},
        splits=splits,
        min_size=root_exact[1] + base_size,
        full_size=bundle_size(bundle),
    )
    return AbstractionResult(
        cut=cut,
        mapping=mapping,
        compressed=compressed,
        size=size,
        expressiveness=len(cut),
        base_size=base_size,
        feasible=feasible,
        bound=bound,
        free_variables=free_vars,
        diagnostics=diagnostics,
    )


def diagnostics_obj(result: AbstractionResult) -> dict:
    """JSON-ready view of the DP internals behind a result."""
    diag = result.diagnostics
    if diag is None:
        raise ValidationError("result carries no diagnostics")
    return {
        "counts": dict(sorted(diag.counts.items())),
        "base_size": diag.base_size,
        "min_size": diag.min_size,
        "full_size": diag.full_size,
        "frontiers": {
            name: [[k, v] for k, v in sorted(f.items())]
            for name, f in diag.frontiers.items()
        },
        "splits": diag.splits,
        "cut": list(result.cut.nodes),
    }


# ---------------------------------------------------------------------------
# Exhaustive oracle


def count_cuts(tree: AbstractionTree) -> int:
    """Number of valid cuts: 1 for a leaf, 1 + product over children else."""

    def rec(node: TreeNode) -> int:
        if node.is_leaf:
            return 1
        total = 1
        for child in node.children:
            total *= rec(child)
        return 1 + total

    return rec(tree.root)


def enumerate_cuts(tree: AbstractionTree):
    """Yield every valid cut as a tuple of node names."""

    def rec(node: TreeNode):
        yield (node.name,)
        if node.is_leaf:
            return
        for combo in product(*(list(rec(c)) for c in node.children)):
            merged = tuple(n for part in combo for n in part)
            if merged != (node.name,):
                yield merged

    # the bare-node option of the root is yielded once by rec
    yield from rec(tree.root)


def brute_force_optimize(
    bundle: ProvenanceBundle, tree: AbstractionTree, bound: int
) -> AbstractionResult:
    """Materialize every cut and pick the optimum; testing oracle only."""
    if bound < 1:
        raise ValidationError("bound must be ≥ 1")
    total = count_cuts(tree)
    if total > BRUTE_FORCE_CUT_GUARD:
        raise ValidationError(f"tree has {total} cuts, above the brute-force guard")
    _, base_size = compute_counts(bundle, tree)

    best = None  # (-(cardinality), size, sorted cut, compressed)
    root_entry = None
    for names in enumerate_cuts(tree):
        cut = validate_cut(tree, names)
        compressed = apply_abstraction(bundle, tree, cut)
        size = bundle_size(compressed)
        key = (-len(cut), size, cut.nodes)
        if len(cut) == 1 and cut.nodes[0] == tree.root.name:
            root_entry = (cut, compressed, size)
        if size <= bound and (best is None or key < best[0]):
            best = (key, cut, compressed, size)

    if best is not None:
        _, cut, compressed, size = best
        feasible = True
    else:
        assert root_entry is not None
        cut, compressed, size = root_entry
        feasible = False
    return AbstractionResult(
        cut=cut,
        mapping=cut_mapping(tree, cut),
        compressed=compressed,
        size=size,
        expressiveness=len(cut),
        base_size=base_size,
        feasible=feasible,
        bound=bound,
        free_variables=tuple(sorted(bundle.variables - tree.leaf_set)),
        diagnostics=None,
    )
