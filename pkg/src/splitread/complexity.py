"""Cognitive-load predictors computed from parse structures.

Implements the word-level scoring schemes of Yngve (1960) and Frazier
(1985) over constituency trees, a per-token node-count ratio, and mean
linear dependency length over dependency graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .trees import DepGraph, ParseTree

SENTENCE_LABEL_PREFIXES = ("S",)


@dataclass(frozen=True)
class ComplexityScores:
    yngve: float
    frazier: float
    tnodes: float
    dep_length: float


def yngve_costs(tree: ParseTree) -> list[float]:
    """Per-word Yngve costs, in textual order.

    Every edge of the tree is weighted by the number of right sisters of
    the child node; a word's cost is the sum of the weights on the path
    from the root to its leaf.
    """
    if tree.is_leaf:
        return [0.0]
    costs: list[float] = []

    def walk(node: ParseTree, acc: float) -> None:
        last = len(node.children) - 1
        for i, child in enumerate(node.children):
            weight = last - i
            if child.is_leaf:
                costs.append(acc + weight)
            else:
                walk(child, acc + weight)

    walk(tree, 0.0)
    return costs


def yngve_score(tree: ParseTree) -> float:
    """Mean Yngve cost over the token leaves."""
    costs = yngve_costs(tree)
    return sum(costs) / len(costs)


def _node_weight(label: str, sentence_prefixes: Sequence[str]) -> float:
    return 1.5 if any(label.startswith(p) for p in sentence_prefixes) else 1.0


def frazier_costs(
    tree: ParseTree, sentence_prefixes: Sequence[str] = SENTENCE_LABEL_PREFIXES
) -> list[float]:
    """Per-word Frazier depths, in textual order.

    From each word, ancestors are counted upward for as long as each one
    is the leftmost child of its parent, stopping after the root; every
    counted node scores 1, except sentence-category nodes (label matching
    one of ``sentence_prefixes``) which score 1.5. Words that are not the
    leftmost child of their parent score 0.
    """
    if tree.is_leaf:
        return [0.0]
    parent: dict[int, tuple[ParseTree, int]] = {}
    leaves: list[ParseTree] = []

    def index(node: ParseTree) -> None:
        for i, child in enumerate(node.children):
            parent[id(child)] = (node, i)
            if child.is_leaf:
                leaves.append(child)
            else:
                index(child)

    index(tree)
    costs: list[float] = []
    for leaf in leaves:
        _, leaf_pos = parent[id(leaf)]
        if leaf_pos != 0:
            costs.append(0.0)
            continue
        cost = 0.0
        node = parent[id(leaf)][0]
        while True:
            info = parent.get(id(node))
            if info is None:  # reached the root
                cost += _node_weight(node.label, sentence_prefixes)
                break
            up, pos = info
            if pos != 0:
                break
            cost += _node_weight(node.label, sentence_prefixes)
            node = up
        costs.append(cost)
    return costs


def frazier_score(
    tree: ParseTree, sentence_prefixes: Sequence[str] = SENTENCE_LABEL_PREFIXES
) -> float:
    """Mean Frazier depth over the token leaves."""
    costs = frazier_costs(tree, sentence_prefixes)
    return sum(costs) / len(costs)


def tnodes(tree: ParseTree, count_token_leaves: bool = False) -> float:
    """Tree nodes per token.

    Token leaves are excluded from the node count by default so the ratio
    reflects structural size; ``count_token_leaves=True`` includes them.
    """
    structure = 0
    tokens = 0
    for node in tree.iter_nodes():
        if node.is_leaf:
            tokens += 1
            if count_token_leaves:
                structure += 1
        else:
            structure += 1
    if tokens == 0:
        raise ValidationError("tree has no token leaves")
    return structure / tokens


def dep_distance(graph: DepGraph) -> float:
    """Mean linear arc length |head - dependent| over non-root tokens.

    A single-token sentence has no arcs and scores 0.
    """
    arcs = [abs(tok.head - tok.index) for tok in graph.tokens if tok.head != 0]
    if not arcs:
        return 0.0
    return sum(arcs) / len(arcs)


def complexity_scores(
    tree: ParseTree,
    graph: DepGraph,
    *,
    sentence_prefixes: Sequence[str] = SENTENCE_LABEL_PREFIXES,
    count_token_leaves: bool = False,
) -> ComplexityScores:
    return ComplexityScores(
        yngve=yngve_score(tree),
        frazier=frazier_score(tree, sentence_prefixes),
        tnodes=tnodes(tree, count_token_leaves),
        dep_length=dep_distance(graph),
    )
