"""Abstraction trees, cuts, and application of an abstraction to a bundle.

Leaves of an abstraction tree are provenance variables; internal nodes are
candidate meta-variables.  A cut (an antichain covering all leaves) renames
every leaf to its covering cut node, after which identical monomials merge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from statistics import fmean

from .core import (
    NAME_PATTERN,
    Monomial,
    Polynomial,
    ProvenanceBundle,
    Valuation,
)
from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class TreeNode:
    name: str
    children: tuple["TreeNode", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


class AbstractionTree:
    """A validated rooted tree with precomputed ancestor/leaf indexes."""

    def __init__(self, root: TreeNode):
        self.root = root
        self.nodes: dict[str, TreeNode] = {}
        self.parent: dict[str, str | None] = {}
        self.ancestors: dict[str, frozenset[str]] = {}  # ancestor-or-self names
        self.leaves_under: dict[str, frozenset[str]] = {}
        order: list[str] = []

        def visit(node: TreeNode, chain: frozenset[str]) -> frozenset[str]:
            if not NAME_PATTERN.match(node.name):
                raise ValidationError(f"invalid node name {node.name!r}")
            if node.name in self.nodes:
                raise ValidationError(f"duplicate node name {node.name!r}")
            self.nodes[node.name] = node
            order.append(node.name)
            chain = chain | {node.name}
            self.ancestors[node.name] = chain
            if node.is_leaf:
                leaves = frozenset({node.name})
            else:
                leaves = frozenset()
                for child in node.children:
                    self.parent[child.name] = node.name
                    leaves |= visit(child, chain)
            self.leaves_under[node.name] = leaves
            return leaves

        self.parent[root.name] = None
        visit(root, frozenset())
        self.preorder: tuple[str, ...] = tuple(order)
        self.leaves: tuple[str, ...] = tuple(
            n for n in order if self.nodes[n].is_leaf
        )
        self.leaf_set: frozenset[str] = frozenset(self.leaves)
        self.internal_names: frozenset[str] = frozenset(self.nodes) - self.leaf_set

    def is_ancestor_or_self(self, a: str, b: str) -> bool:
        return a in self.ancestors[b]

    def to_obj(self) -> dict:
        def conv(node: TreeNode) -> dict:
            if node.is_leaf:
                return {"name": node.name}
            return {"name": node.name, "children": [conv(c) for c in node.children]}

        return conv(self.root)


def tree_from_obj(obj: object) -> AbstractionTree:
    def conv(o: object) -> TreeNode:
        if not isinstance(o, dict) or not isinstance(o.get("name"), str):
            raise ParseError(f'tree node must be an object with a "name": {o!r}')
        children = o.get("children", [])
        if not isinstance(children, list):
            raise ParseError(f'"children" of {o["name"]!r} must be a list')
        return TreeNode(o["name"], tuple(conv(c) for c in children))

    return AbstractionTree(conv(obj))


def parse_tree(text: str) -> AbstractionTree:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid tree JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return tree_from_obj(obj)


@dataclass(frozen=True)
class Cut:
    """An antichain of node names covering every leaf of one tree."""

    nodes: tuple[str, ...]  # sorted

    def __contains__(self, name: str) -> bool:
        return name in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


def validate_cut(tree: AbstractionTree, names) -> Cut:
    names = set(names)
    missing = sorted(n for n in names if n not in tree.nodes)
    if missing:
        raise ValidationError(f"cut names not in tree: {', '.join(missing)}")
    for name in sorted(names):
        above = (tree.ancestors[name] - {name}) & names
        if above:
            other = sorted(above)[0]
            raise ValidationError(f"cut is not an antichain: {other!r} is an ancestor of {name!r}")
    for leaf in tree.leaves:
        if not (tree.ancestors[leaf] & names):
            raise ValidationError(f"cut does not cover leaf {leaf!r}")
    return Cut(tuple(sorted(names)))


def cut_mapping(tree: AbstractionTree, cut: Cut) -> dict[str, str]:
    """Map every tree leaf to its unique covering cut node."""
    mapping: dict[str, str] = {}
    for node in cut.nodes:
        for leaf in tree.leaves_under[node]:
            mapping[leaf] = node
    return mapping


def _check_name_collisions(bundle: ProvenanceBundle, tree: AbstractionTree) -> None:
    clashes = sorted(tree.internal_names & (bundle.variables - tree.leaf_set))
    if clashes:
        raise ValidationError(
            "meta-variable names collide with bundle variables: " + ", ".join(clashes)
        )


def _tree_factor(m: Monomial, leaf_set: frozenset[str], poly_key: str) -> tuple[str, int] | None:
    """The single tree-leaf factor of a monomial, or None.

    Raises when a monomial touches more than one tree leaf: a single
    abstraction tree can rename at most one variable per monomial.
    """
    hits = [(n, e) for n, e in m.factors if n in leaf_set]
    if len(hits) > 1:
        raise ValidationError(
            f"monomial in polynomial {poly_key!r} contains multiple tree leaves "
            f"{hits[0][0]!r} and {hits[1][0]!r}"
        )
    return hits[0] if hits else None


def apply_abstraction(bundle: ProvenanceBundle, tree: AbstractionTree, cut: Cut) -> ProvenanceBundle:
    """Rename every tree-leaf variable to its cut node and re-merge."""
    _check_name_collisions(bundle, tree)
    mapping = cut_mapping(tree, cut)
    leaf_set = tree.leaf_set
    polys = []
    for poly in bundle.polynomials:
        out = []
        for m in poly.monomials:
            hit = _tree_factor(m, leaf_set, poly.key)
            if hit is None:
                out.append(m)
            else:
                name, exp = hit
                meta = mapping[name]
                factors = tuple(
                    (meta, e) if n == name else (n, e) for n, e in m.factors
                )
                out.append(Monomial.make(m.coefficient, factors))
        polys.append(Polynomial.make(poly.key, out))
    return ProvenanceBundle.make(polys)


def induced_valuation(meta_val: Valuation, mapping: dict[str, str]) -> Valuation:
    """Push meta-variable values down to the original leaf variables."""
    cut_nodes = set(mapping.values())
    assignments = {
        name: value for name, value in meta_val.assignments.items() if name not in cut_nodes
    }
    for leaf, meta in mapping.items():
        assignments[leaf] = meta_val.value(meta)
    return Valuation(assignments, meta_val.default)


def default_meta_valuation(
    bundle: ProvenanceBundle, mapping: dict[str, str], base_val: Valuation
) -> Valuation:
    """Default for each meta-variable: mean of its leaves' baseline values.

    The mean is taken over leaves that occur in the bundle; if none of a
    group's leaves occur, over all of its leaves.
    """
    occurring = bundle.variables
    groups: dict[str, list[str]] = {}
    for leaf, meta in mapping.items():
        groups.setdefault(meta, []).append(leaf)
    assignments = {
        name: value for name, value in base_val.assignments.items() if name not in mapping
    }
    for meta, leaves in groups.items():
        present = [l for l in leaves if l in occurring]
        pool = present or leaves
        assignments[meta] = fmean(base_val.value(l) for l in pool)
    return Valuation(assignments, base_val.default)
