"""Shared generators and independent oracle implementations.

The oracles deliberately avoid the production code paths: tree edit
distance is recomputed with a memoized forest recursion, kernels by
explicit fragment enumeration, and the word-level tree scores by
path-at-a-time traversals.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache

import numpy as np

from splitread.trees import DepGraph, DepToken, ParseTree

LABELS = ("A", "B", "C", "S")
TOKENS = ("x", "y", "z", "w")


def random_tree(rng: np.random.Generator, max_nodes: int) -> ParseTree:
    """Random ordered labeled tree with an internal root; token leaves."""
    budget = int(rng.integers(2, max_nodes + 1))

    def build(n: int) -> ParseTree:
        if n == 1:
            return ParseTree(str(rng.choice(TOKENS)))
        n_children = int(rng.integers(1, min(3, n - 1) + 1))
        remaining = n - 1
        sizes = []
        for j in range(n_children):
            left = n_children - 1 - j
            hi = remaining - left
            size = int(rng.integers(1, hi + 1)) if j < n_children - 1 else remaining
            sizes.append(size)
            remaining -= size
        return ParseTree(
            str(rng.choice(LABELS)), tuple(build(s) for s in sizes)
        )

    return build(budget)


def random_dep_graph(rng: np.random.Generator, n_tokens: int) -> DepGraph:
    order = rng.permutation(n_tokens)
    heads = [0] * n_tokens
    placed = [int(order[0])]
    for idx in order[1:]:
        heads[int(idx)] = int(rng.choice(placed)) + 1
        placed.append(int(idx))
    return DepGraph(
        tuple(
            DepToken(index=i + 1, form=f"tok{i}", head=heads[i], relation="dep")
            for i in range(n_tokens)
        )
    )


def naive_ted(a: ParseTree, b: ParseTree) -> int:
    """Ordered tree edit distance via the plain forest recursion."""

    @lru_cache(maxsize=None)
    def forest_dist(fa: tuple, fb: tuple) -> int:
        if not fa and not fb:
            return 0
        if not fa:
            return sum(t.size() for t in fb)
        if not fb:
            return sum(t.size() for t in fa)
        ta, tb = fa[-1], fb[-1]
        delete = 1 + forest_dist(fa[:-1] + ta.children, fb)
        insert = 1 + forest_dist(fa, fb[:-1] + tb.children)
        relabel = (
            (0 if ta.label == tb.label else 1)
            + forest_dist(ta.children, tb.children)
            + forest_dist(fa[:-1], fb[:-1])
        )
        return min(delete, insert, relabel)

    result = forest_dist((a,), (b,))
    forest_dist.cache_clear()
    return result


def _complete_subtree_strings(tree: ParseTree) -> list[str]:
    out = []
    for node in tree.iter_nodes():
        if not node.is_leaf:
            out.append(node.to_bracketed())
    return out


def naive_subtree_kernel(a: ParseTree, b: ParseTree) -> float:
    ca = Counter(_complete_subtree_strings(a))
    cb = Counter(_complete_subtree_strings(b))
    return float(sum(ca[s] * cb[s] for s in ca))


def _fragments_rooted(node: ParseTree) -> list[str]:
    # Terminal children are marked "t:"; unexpanded nonterminals "n:" so
    # that a terminal never matches a like-labeled nonterminal.
    options = []
    for child in node.children:
        if child.is_leaf:
            options.append([f"t:{child.label}"])
        else:
            options.append([f"n:{child.label}"] + _fragments_rooted(child))
    return [
        "(" + node.label + " " + " ".join(combo) + ")"
        for combo in itertools.product(*options)
    ]


def _fragment_strings(tree: ParseTree) -> list[str]:
    out = []
    for node in tree.iter_nodes():
        if not node.is_leaf:
            out.extend(_fragments_rooted(node))
    return out


def naive_subset_kernel(a: ParseTree, b: ParseTree) -> float:
    """Shared subset-tree fragment count (the sigma = 1 kernel)."""
    ca = Counter(_fragment_strings(a))
    cb = Counter(_fragment_strings(b))
    return float(sum(ca[s] * cb[s] for s in ca))


def naive_yngve_costs(tree: ParseTree) -> list[float]:
    costs = []

    def descend(node: ParseTree, spine: list[tuple[ParseTree, int]]) -> None:
        for i, child in enumerate(node.children):
            path = spine + [(node, i)]
            if child.is_leaf:
                costs.append(
                    float(sum(len(p.children) - 1 - idx for p, idx in path))
                )
            else:
                descend(child, path)

    descend(tree, [])
    return costs


def naive_frazier_costs(tree: ParseTree, prefixes=("S",)) -> list[float]:
    costs = []

    def weight(node: ParseTree) -> float:
        return 1.5 if any(node.label.startswith(p) for p in prefixes) else 1.0

    def descend(node: ParseTree, spine: list[tuple[ParseTree, int]]) -> None:
        for i, child in enumerate(node.children):
            path = spine + [(node, i)]
            if not child.is_leaf:
                descend(child, path)
                continue
            if i != 0:
                costs.append(0.0)
                continue
            total = 0.0
            # Ancestors from the leaf's parent upward; positions come from
            # the spine one level up.
            for level in range(len(path) - 1, -1, -1):
                ancestor = path[level][0]
                if level == 0:
                    total += weight(ancestor)
                    break
                if path[level - 1][1] != 0:
                    break
                total += weight(ancestor)
            costs.append(total)

    descend(tree, [])
    return costs


def naive_tnodes(tree: ParseTree, count_token_leaves: bool = False) -> float:
    def count(node: ParseTree) -> tuple[int, int]:
        if node.is_leaf:
            return (1 if count_token_leaves else 0), 1
        nodes, tokens = 1, 0
        for child in node.children:
            cn, ct = count(child)
            nodes += cn
            tokens += ct
        return nodes, tokens

    nodes, tokens = count(tree)
    return nodes / tokens
