from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import naive_subset_kernel, naive_subtree_kernel, naive_ted, random_tree
from splitread.cohesion import (
    kernel_similarity,
    overlap_coefficient,
    ted1,
    ted2,
    tree_edit_distance,
    tree_kernel,
)
from splitread.errors import DegenerateInputWarning, ValidationError
from splitread.trees import parse_ptb


def t(text: str):
    return parse_ptb(text)[0]


class TestTreeEditDistance:
    def test_identical_trees(self, fig_tree):
        assert tree_edit_distance(fig_tree, fig_tree) == 0

    def test_subtree_deletion(self):
        assert tree_edit_distance(t("(A (B x) (C y))"), t("(A (B x))")) == 2

    def test_root_relabel(self):
        assert tree_edit_distance(t("(A x)"), t("(B x)")) == 1

    def test_matches_forest_recursion_oracle(self, rng):
        for _ in range(150):
            a = random_tree(rng, 12)
            b = random_tree(rng, 12)
            assert tree_edit_distance(a, b) == naive_ted(a, b)

    def test_matches_oracle_on_larger_trees(self, rng):
        for _ in range(10):
            a = random_tree(rng, 25)
            b = random_tree(rng, 25)
            assert tree_edit_distance(a, b) == naive_ted(a, b)

    def test_metric_properties_on_random_triples(self, rng):
        for _ in range(60):
            a, b, c = (random_tree(rng, 10) for _ in range(3))
            dab = tree_edit_distance(a, b)
            dba = tree_edit_distance(b, a)
            assert dab == dba
            assert (dab == 0) == (a == b)
            dac = tree_edit_distance(a, c)
            dbc = tree_edit_distance(b, c)
            assert dac <= dab + dbc


class TestTed1:
    def test_identity(self, fig_tree):
        assert ted1(fig_tree, [fig_tree]) == 0.0

    def test_mean_of_verified_distances(self):
        source = t("(A (B (C (D (E x)))))")
        near = t("(A x)")
        far = t("(Z (Y (X (W (V (U (Q x)))))))")
        # Verify both split distances against the independent oracle before
        # asserting on the mean (token leaves kept for direct arithmetic).
        d1 = naive_ted(source, near)
        d2 = naive_ted(source, far)
        assert tree_edit_distance(source, near) == d1
        assert tree_edit_distance(source, far) == d2
        expected = (d1 + d2) / 2
        assert ted1(source, [near, far], keep_token_leaves=True) == expected

    def test_single_relabel_split(self):
        assert ted1(t("(A x)"), [t("(B x)")], keep_token_leaves=True) == 1.0

    def test_strips_token_leaves_by_default(self):
        # Same skeleton, different words: structural distance is 0.
        assert ted1(t("(A (B x))"), [t("(A (B y))")]) == 0.0

    def test_empty_splits_rejected(self, fig_tree):
        with pytest.raises(ValidationError):
            ted1(fig_tree, [])


class TestTed2:
    def test_identical_pair(self, fig_tree):
        assert ted2([fig_tree, fig_tree]) == 0.0

    def test_mean_of_adjacent_distances(self):
        s1 = t("(A (B x) (C y))")
        s2 = t("(A (B x))")
        s3 = t("(D (E x))")
        expected = (
            tree_edit_distance(s1, s2) + tree_edit_distance(s2, s3)
        ) / 2
        assert ted2([s1, s2, s3], keep_token_leaves=True) == expected

    def test_single_split_warns_and_scores_zero(self, fig_tree):
        with pytest.warns(DegenerateInputWarning):
            assert ted2([fig_tree]) == 0.0


class TestTreeKernel:
    def test_disjoint_productions(self):
        assert tree_kernel(t("(A x)"), t("(B y)"), "subset") == 0.0
        assert tree_kernel(t("(A x)"), t("(B y)"), "subtree") == 0.0

    def test_subtree_self_kernel_counts_complete_subtrees(self):
        tree = t("(A (B x) (C y))")
        assert tree_kernel(tree, tree, "subtree") == 3.0

    def test_subset_self_kernel_matches_enumeration(self):
        tree = t("(A (B x) (C y))")
        assert tree_kernel(tree, tree, "subset", 1.0) == 6.0
        assert naive_subset_kernel(tree, tree) == 6.0

    def test_asymmetric_pair_hand_counts(self):
        # Shared fragments of (A (B x) (C y)) and (A (B x) (C z)):
        # [B x], [A B C], [A [B x] C] -> subset 3; complete subtrees
        # share only [B x] -> subtree 1.
        t1 = t("(A (B x) (C y))")
        t2 = t("(A (B x) (C z))")
        assert tree_kernel(t1, t2, "subset", 1.0) == 3.0
        assert tree_kernel(t1, t2, "subtree") == 1.0

    def test_invalid_sigma(self, fig_tree):
        with pytest.raises(ValueError):
            tree_kernel(fig_tree, fig_tree, "subset", 0.0)
        with pytest.raises(ValueError):
            tree_kernel(fig_tree, fig_tree, "subset", -1.0)

    def test_invalid_variant(self, fig_tree):
        with pytest.raises(ValueError):
            tree_kernel(fig_tree, fig_tree, "bogus")

    def test_matches_fragment_enumeration(self, rng):
        for _ in range(80):
            a = random_tree(rng, 8)
            b = random_tree(rng, 8)
            assert tree_kernel(a, b, "subset", 1.0) == naive_subset_kernel(a, b)
            assert tree_kernel(a, b, "subtree") == naive_subtree_kernel(a, b)

    def test_symmetry(self, rng):
        for _ in range(40):
            a = random_tree(rng, 10)
            b = random_tree(rng, 10)
            for variant in ("subset", "subtree"):
                assert tree_kernel(a, b, variant) == tree_kernel(b, a, variant)

    def test_subset_kernel_nondecreasing_in_sigma(self):
        a = t("(A (B x) (C y))")
        values = [tree_kernel(a, a, "subset", s) for s in (0.5, 1.0, 2.0, 4.0)]
        assert values == sorted(values)

    def test_terminal_never_matches_like_labeled_nonterminal(self):
        # "(A x)" has production A -> terminal x; "(A (x y))" has A -> x
        # where x is a nonterminal. They share no fragment.
        assert tree_kernel(t("(A x)"), t("(A (x y))"), "subset") == 0.0


class TestKernelSimilarity:
    def test_self_document(self, fig_tree):
        assert kernel_similarity([fig_tree], [fig_tree]) == 1.0

    def test_disjoint_documents(self):
        assert kernel_similarity([t("(A x)")], [t("(B y)")]) == 0.0

    def test_best_pair_is_exact_match(self, fig_tree):
        other = t("(A (B x) (C y))")
        assert kernel_similarity([fig_tree], [fig_tree, other]) == 1.0

    def test_doc_contained_in_other_scores_one(self, rng):
        docs = [random_tree(rng, 10) for _ in range(3)]
        for variant in ("subset", "subtree"):
            assert kernel_similarity(docs, docs + [random_tree(rng, 10)], variant) == pytest.approx(1.0)

    def test_bounded_in_unit_interval(self, rng):
        for _ in range(30):
            doc_a = [random_tree(rng, 9) for _ in range(2)]
            doc_b = [random_tree(rng, 9) for _ in range(2)]
            for variant in ("subset", "subtree"):
                value = kernel_similarity(doc_a, doc_b, variant)
                assert 0.0 <= value <= 1.0 + 1e-12

    def test_empty_document_rejected(self, fig_tree):
        with pytest.raises(ValidationError):
            kernel_similarity([], [fig_tree])


class TestOverlap:
    def test_subset_scores_one(self):
        assert overlap_coefficient({"a", "b"}, {"a", "b", "c"}) == 1.0

    def test_disjoint_scores_zero(self):
        assert overlap_coefficient({"a"}, {"b"}) == 0.0

    def test_partial_overlap(self):
        assert overlap_coefficient({"a", "b", "c"}, {"b", "c", "d"}) == 2 / 3

    def test_case_and_punctuation_normalization(self):
        assert overlap_coefficient(["The", "dog", "."], ["the", "DOG", "!"]) == 1.0

    def test_empty_after_normalization_warns(self):
        with pytest.warns(DegenerateInputWarning):
            assert overlap_coefficient([".", ","], ["dog"]) == 0.0

    @settings(max_examples=50, deadline=None)
    @given(st.sets(st.text(alphabet="abcdefg", min_size=1, max_size=5), min_size=1))
    def test_self_overlap_is_one(self, tokens):
        assert overlap_coefficient(tokens, tokens) == 1.0
