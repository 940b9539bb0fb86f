"""Synthetic fixtures: logit-model design matrices and demo datasets.

Used by the test suite and handy for smoke-testing the command line
without access to a judgment study.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy.special import expit

from .dataset import DesignMatrix
from .trees import ParseTree

_VOCAB = (
    "alder", "airport", "serves", "island", "runway", "surface", "grass",
    "meters", "long", "river", "bridge", "city", "team", "player", "wrote",
    "novel", "opened", "museum", "north", "station", "train", "red", "old",
    "the", "a", "its", "and", "has", "is", "was", "near", "with",
)
_PHRASE_LABELS = ("NP", "VP", "PP", "ADJP", "ADVP")
_POS_LABELS = ("NN", "VB", "DT", "JJ", "IN", "RB")


def random_sentence_tree(rng: np.random.Generator, n_tokens: int) -> ParseTree:
    """Random constituency tree with POS preterminals and an S root."""
    tokens = [str(rng.choice(_VOCAB)) for _ in range(n_tokens)]

    def build(span: list[str], depth: int) -> ParseTree:
        if len(span) == 1:
            pos = str(rng.choice(_POS_LABELS))
            return ParseTree(pos, (ParseTree(span[0]),))
        if depth > 4 or len(span) == 2:
            cut = 1
        else:
            cut = int(rng.integers(1, len(span)))
        label = str(rng.choice(_PHRASE_LABELS))
        left = build(span[:cut], depth + 1)
        right = build(span[cut:], depth + 1)
        return ParseTree(label, (left, right))

    if n_tokens == 1:
        return ParseTree("S", (build(tokens, 1),))
    cut = max(1, n_tokens // 3)
    return ParseTree("S", (build(tokens[:cut], 1), build(tokens[cut:], 1)))


def random_conllu(rng: np.random.Generator, tokens: list[str]) -> str:
    """Random single-rooted acyclic dependency block over the tokens."""
    n = len(tokens)
    order = rng.permutation(n)
    heads = [0] * n
    placed = [int(order[0])]
    for idx in order[1:]:
        heads[int(idx)] = int(rng.choice(placed)) + 1
        placed.append(int(idx))
    lines = []
    for i, form in enumerate(tokens):
        rel = "root" if heads[i] == 0 else "dep"
        lines.append(
            "\t".join(
                [str(i + 1), form, "_", "_", "_", "_", str(heads[i]), rel, "_", "_"]
            )
        )
    return "\n".join(lines) + "\n"


def _sentence_block(rng: np.random.Generator, n_sentences: int, lo: int, hi: int):
    trees = [
        random_sentence_tree(rng, int(rng.integers(lo, hi + 1)))
        for _ in range(n_sentences)
    ]
    conllu = "\n".join(random_conllu(rng, t.tokens()) for t in trees)
    text = " . ".join(" ".join(t.tokens()) for t in trees) + " ."
    return trees, conllu, text


def make_demo_dataset(
    out_dir: str | Path,
    n_triples: int = 24,
    n_workers: int = 7,
    seed: int = 7,
    bart_fraction: float = 0.5,
) -> tuple[Path, Path]:
    """Write a synthetic triples.jsonl / judgments.jsonl pair and return
    their paths."""
    rng = np.random.default_rng(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    triples_path = out / "triples.jsonl"
    judgments_path = out / "judgments.jsonl"

    n_bart = int(round(n_triples * bart_fraction))
    triple_lines = []
    judgment_lines = []
    for i in range(n_triples):
        tid = f"t{i:04d}"
        origin = "bart" if i < n_bart else "human"
        src_trees, src_conllu, src_text = _sentence_block(rng, 1, 8, 12)
        a_trees, a_conllu, a_text = _sentence_block(rng, 2, 4, 7)
        b_trees, b_conllu, b_text = _sentence_block(rng, 3, 3, 6)
        triple_lines.append(
            json.dumps(
                {
                    "schema": 1,
                    "id": tid,
                    "source": {
                        "text": src_text,
                        "ptb": [t.to_bracketed() for t in src_trees],
                    },
                    "a": {
                        "text": a_text,
                        "ptb": [t.to_bracketed() for t in a_trees],
                        "origin": origin,
                    },
                    "b": {
                        "text": b_text,
                        "ptb": [t.to_bracketed() for t in b_trees],
                    },
                    "conllu": {"source": src_conllu, "a": a_conllu, "b": b_conllu},
                    "precomputed": {
                        "samsa_a": float(np.round(rng.uniform(0.2, 1.0), 4)),
                        "samsa_b": float(np.round(rng.uniform(0.2, 1.0), 4)),
                    },
                }
            )
        )
        for w in range(n_workers):
            wid = f"w{w:02d}"
            scores = {
                side: {
                    cat: int(rng.integers(3, 6))
                    for cat in ("grammar", "meaning", "fluency")
                }
                for side in ("a", "b")
            }
            for question, p_first in (
                ("S_vs_A", 0.33),
                ("S_vs_B", 0.38),
                ("A_vs_B", 0.58),
            ):
                u = rng.uniform()
                if u < 0.02:
                    choice = "not_sure"
                elif u < 0.02 + p_first * 0.98:
                    choice = "first"
                else:
                    choice = "second"
                judgment_lines.append(
                    json.dumps(
                        {
                            "schema": 1,
                            "triple_id": tid,
                            "worker_id": wid,
                            "question": question,
                            "choice": choice,
                            "scores": scores,
                        }
                    )
                )
    triples_path.write_text("\n".join(triple_lines) + "\n", encoding="utf-8")
    judgments_path.write_text("\n".join(judgment_lines) + "\n", encoding="utf-8")
    return triples_path, judgments_path


def make_logit_matrix(
    n_rows: int,
    beta: list[float] | np.ndarray,
    seed: int = 0,
    predictor_names: list[str] | None = None,
) -> DesignMatrix:
    """Design matrix with standardized Gaussian predictors and a binary
    outcome drawn from the logistic model with coefficients ``beta``
    (intercept first)."""
    beta = np.asarray(beta, dtype=float)
    k = beta.size - 1
    names = predictor_names or [f"x{j}" for j in range(1, k + 1)]
    if len(names) != k:
        raise ValueError("predictor_names length must be len(beta) - 1")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_rows, k))
    X = (X - X.mean(axis=0)) / X.std(axis=0)
    probs = expit(beta[0] + X @ beta[1:])
    y = (rng.uniform(size=n_rows) < probs).astype(float)
    return DesignMatrix.from_arrays(names, X, y, categorical=())
