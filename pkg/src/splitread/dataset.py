"""Judgment-study ingestion, descriptive tallies and the design matrix.

The inputs are two JSONL files: one triple record per source sentence
(with its two- and three-sentence simplifications and their parses), and
one judgment record per (triple, worker, question). The design matrix is
assembled in long format: every definite two-vs-three preference yields
two rows, one per simplification side, with a binary outcome marking the
chosen side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats as sstats

from . import cohesion, complexity, readability
from .errors import (
    FormatError,
    IntegrityError,
    StandardizationError,
    ValidationError,
)
from .trees import DepGraph, ParseTree, parse_conllu, parse_ptb

QUESTIONS = ("S_vs_A", "S_vs_B", "A_vs_B")
CHOICES = ("first", "second", "not_sure")
CATEGORIES = ("grammar", "meaning", "fluency")
ORIGINS = ("bart", "human")

# Canonical predictor battery and its column order.
PREDICTORS = (
    "bart",
    "ted1",
    "ted2",
    "subset",
    "subtree",
    "overlap",
    "frazier",
    "yngve",
    "dep_length",
    "tnodes",
    "dale",
    "ease",
    "fk_grade",
    "grammar",
    "meaning",
    "fluency",
    "split",
    "samsa",
)
CATEGORICAL_PREDICTORS = ("bart", "split")
# Predictors computed from the triple alone (everything but the per-worker
# perception scores).
SIDE_PREDICTORS = tuple(p for p in PREDICTORS if p not in CATEGORIES)


@dataclass(frozen=True)
class Simplification:
    text: str
    trees: tuple[ParseTree, ...]
    origin: str
    graphs: tuple[DepGraph, ...] = ()
    samsa: float | None = None


@dataclass(frozen=True)
class Triple:
    id: str
    source_text: str
    source_trees: tuple[ParseTree, ...]
    split_a: Simplification
    split_b: Simplification
    source_graphs: tuple[DepGraph, ...] = ()

    def side(self, which: str) -> Simplification:
        if which == "a":
            return self.split_a
        if which == "b":
            return self.split_b
        raise ValueError(f"unknown side {which!r}")


@dataclass(frozen=True)
class SideScores:
    grammar: int
    meaning: int
    fluency: int

    def __post_init__(self) -> None:
        for cat in CATEGORIES:
            value = getattr(self, cat)
            if (
                isinstance(value, bool)
                or not isinstance(value, int)
                or not 1 <= value <= 5
            ):
                raise ValidationError(
                    f"{cat} score must be an integer in 1..5, got {value!r}"
                )

    def get(self, category: str) -> int:
        return getattr(self, category)


@dataclass(frozen=True)
class JudgmentRecord:
    triple_id: str
    worker_id: str
    question: str
    choice: str
    scores_a: SideScores
    scores_b: SideScores

    def __post_init__(self) -> None:
        if self.question not in QUESTIONS:
            raise ValidationError(f"unknown question {self.question!r}")
        if self.choice not in CHOICES:
            raise ValidationError(f"unknown choice {self.choice!r}")

    def scores(self, side: str) -> SideScores:
        return self.scores_a if side == "a" else self.scores_b


def _json_lines(path: str | Path) -> Iterable[tuple[int, dict]]:
    text = Path(path).read_text("utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{lineno}: bad JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise FormatError(f"{path}:{lineno}: expected a JSON object")
        schema = obj.get("schema", 1)
        if schema != 1:
            raise FormatError(f"{path}:{lineno}: unsupported schema {schema!r}")
        yield lineno, obj


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def _parse_side(
    obj: dict,
    where: str,
    expected_sentences: int,
    origin: str,
    conllu_text: str | None,
    samsa: float | None,
    keep_punctuation: bool,
) -> Simplification:
    text = _require(obj, "text", where)
    ptb = _require(obj, "ptb", where)
    if not isinstance(ptb, list) or not all(isinstance(s, str) for s in ptb):
        raise ValidationError(f"{where}: 'ptb' must be a list of strings")
    trees: list[ParseTree] = []
    for s in ptb:
        trees.extend(parse_ptb(s, keep_punctuation=keep_punctuation))
    if len(trees) != expected_sentences:
        raise ValidationError(
            f"{where}: expected {expected_sentences} sentences, got {len(trees)}"
        )
    graphs: tuple[DepGraph, ...] = ()
    if conllu_text:
        graphs = tuple(parse_conllu(conllu_text))
        if len(graphs) != len(trees):
            raise ValidationError(
                f"{where}: {len(graphs)} dependency graphs for {len(trees)} trees"
            )
    if origin not in ORIGINS:
        raise ValidationError(f"{where}: unknown origin {origin!r}")
    return Simplification(
        text=text, trees=tuple(trees), origin=origin, graphs=graphs, samsa=samsa
    )


def load_triples(
    path: str | Path, *, keep_punctuation: bool = True
) -> list[Triple]:
    triples: list[Triple] = []
    seen: set[str] = set()
    for lineno, obj in _json_lines(path):
        where = f"{path}:{lineno}"
        triple_id = str(_require(obj, "id", where))
        if triple_id in seen:
            raise ValidationError(f"{where}: duplicate triple id {triple_id!r}")
        seen.add(triple_id)
        source = _require(obj, "source", where)
        a = _require(obj, "a", where)
        b = _require(obj, "b", where)
        conllu = obj.get("conllu") or {}
        precomputed = obj.get("precomputed") or {}
        source_trees: list[ParseTree] = []
        for s in _require(source, "ptb", f"{where}.source"):
            source_trees.extend(parse_ptb(s, keep_punctuation=keep_punctuation))
        if not source_trees:
            raise ValidationError(f"{where}: source has no parse trees")
        source_graphs: tuple[DepGraph, ...] = ()
        if conllu.get("source"):
            source_graphs = tuple(parse_conllu(conllu["source"]))
        split_a = _parse_side(
            a,
            f"{where}.a",
            expected_sentences=2,
            origin=str(_require(a, "origin", f"{where}.a")),
            conllu_text=conllu.get("a"),
            samsa=precomputed.get("samsa_a"),
            keep_punctuation=keep_punctuation,
        )
        split_b = _parse_side(
            b,
            f"{where}.b",
            expected_sentences=3,
            origin="human",
            conllu_text=conllu.get("b"),
            samsa=precomputed.get("samsa_b"),
            keep_punctuation=keep_punctuation,
        )
        triples.append(
            Triple(
                id=triple_id,
                source_text=_require(source, "text", f"{where}.source"),
                source_trees=tuple(source_trees),
                split_a=split_a,
                split_b=split_b,
                source_graphs=source_graphs,
            )
        )
    return triples


def _parse_scores(obj: dict, where: str) -> SideScores:
    try:
        return SideScores(
            grammar=obj["grammar"], meaning=obj["meaning"], fluency=obj["fluency"]
        )
    except KeyError as exc:
        raise ValidationError(f"{where}: missing score {exc}") from None


def load_judgments(path: str | Path) -> list[JudgmentRecord]:
    records: list[JudgmentRecord] = []
    for lineno, obj in _json_lines(path):
        where = f"{path}:{lineno}"
        scores = _require(obj, "scores", where)
        records.append(
            JudgmentRecord(
                triple_id=str(_require(obj, "triple_id", where)),
                worker_id=str(_require(obj, "worker_id", where)),
                question=_require(obj, "question", where),
                choice=_require(obj, "choice", where),
                scores_a=_parse_scores(_require(scores, "a", where), f"{where}.a"),
                scores_b=_parse_scores(_require(scores, "b", where), f"{where}.b"),
            )
        )
    return records


def ingest(
    judgments_path: str | Path,
    triples_path: str | Path,
    *,
    keep_punctuation: bool = True,
) -> tuple[list[Triple], list[JudgmentRecord]]:
    """Load both files and enforce referential integrity."""
    triples = load_triples(triples_path, keep_punctuation=keep_punctuation)
    judgments = load_judgments(judgments_path)
    known = {t.id for t in triples}
    for j in judgments:
        if j.triple_id not in known:
            raise IntegrityError(
                f"judgment references unknown triple {j.triple_id!r}"
            )
    return triples, judgments


@dataclass(frozen=True)
class Tally:
    question: str
    counts: Mapping[str, int]
    total: int

    def share(self, choice: str) -> float:
        return round(self.counts[choice] / self.total, 2)

    def cells(self) -> str:
        parts = [
            f"{self.counts[c]} ({self.share(c):.2f})" for c in CHOICES
        ]
        parts.append(str(self.total))
        return " | ".join(parts)


def tally(judgments: Sequence[JudgmentRecord], question: str) -> Tally:
    """Choice counts and 2-decimal shares for one comparison question."""
    if question not in QUESTIONS:
        raise ValidationError(f"unknown question {question!r}")
    subset = [j for j in judgments if j.question == question]
    if not subset:
        raise ValidationError(f"no judgments for question {question}")
    counts = {c: 0 for c in CHOICES}
    for j in subset:
        counts[j.choice] += 1
    return Tally(question=question, counts=counts, total=len(subset))


@dataclass(frozen=True)
class GroupComparison:
    mean_a: float
    sd_a: float
    mean_b: float
    sd_b: float
    t_stat: float
    p_value: float


def quality_scores(
    judgments: Sequence[JudgmentRecord], side: str
) -> dict[str, list[int]]:
    """Per-category score observations for one simplification side.

    Each (triple, worker) pair contributes a single observation per
    category, no matter how many question records it produced.
    """
    seen: set[tuple[str, str]] = set()
    out: dict[str, list[int]] = {cat: [] for cat in CATEGORIES}
    for j in judgments:
        key = (j.triple_id, j.worker_id)
        if key in seen:
            continue
        seen.add(key)
        scores = j.scores(side)
        for cat in CATEGORIES:
            out[cat].append(scores.get(cat))
    return out


def score_summary(
    group_a: Mapping[str, Sequence[float]],
    group_b: Mapping[str, Sequence[float]],
) -> dict[str, GroupComparison]:
    """Mean, sd and a two-sided Welch t-test per score category."""
    out: dict[str, GroupComparison] = {}
    for cat in CATEGORIES:
        a = np.asarray(group_a[cat], dtype=float)
        b = np.asarray(group_b[cat], dtype=float)
        if len(a) < 2 or len(b) < 2:
            raise ValidationError(
                f"{cat}: need at least 2 observations per group for a t-test"
            )
        t_stat, p_value = sstats.ttest_ind(a, b, equal_var=False)
        out[cat] = GroupComparison(
            mean_a=float(a.mean()),
            sd_a=float(a.std(ddof=1)),
            mean_b=float(b.mean()),
            sd_b=float(b.std(ddof=1)),
            t_stat=float(t_stat),
            p_value=float(p_value),
        )
    return out


@dataclass(frozen=True)
class FeatureConfig:
    predictors: tuple[str, ...] = PREDICTORS
    kernel_sigma: float = 1.0
    word_list: str | None = None
    ted_keep_token_leaves: bool = False
    tnodes_count_token_leaves: bool = False
    sentence_prefixes: tuple[str, ...] = complexity.SENTENCE_LABEL_PREFIXES
    layout: str = "long"  # "long" or "diff"

    def __post_init__(self) -> None:
        unknown = [p for p in self.predictors if p not in PREDICTORS]
        if unknown:
            raise ValidationError(f"unknown predictors: {unknown}")
        if self.kernel_sigma <= 0:
            raise ValidationError("kernel_sigma must be positive")
        if self.layout not in ("long", "diff"):
            raise ValidationError(f"unknown layout {self.layout!r}")


class FeatureExtractor:
    """Computes the per-(triple, side) predictor columns."""

    def __init__(self, config: FeatureConfig | None = None):
        self.config = config or FeatureConfig()
        self._easy_words = readability.load_easy_words(self.config.word_list)
        self._cache: dict[tuple[str, str], dict[str, float]] = {}

    def side_features(self, triple: Triple, side: str) -> dict[str, float]:
        key = (triple.id, side)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        try:
            feats = self._compute(triple, side)
        except Exception as exc:
            raise ValidationError(f"triple {triple.id!r}, side {side}: {exc}") from exc
        self._cache[key] = feats
        return feats

    def _compute(self, triple: Triple, side: str) -> dict[str, float]:
        cfg = self.config
        enabled = set(cfg.predictors)
        simp = triple.side(side)
        trees = simp.trees
        feats: dict[str, float] = {}
        if "bart" in enabled:
            feats["bart"] = 1.0 if (side == "a" and simp.origin == "bart") else 0.0
        if "split" in enabled:
            feats["split"] = 1.0 if side == "a" else 0.0
        if "ted1" in enabled:
            values = [
                cohesion.ted1(src, trees, keep_token_leaves=cfg.ted_keep_token_leaves)
                for src in triple.source_trees
            ]
            feats["ted1"] = sum(values) / len(values)
        if "ted2" in enabled:
            feats["ted2"] = cohesion.ted2(
                trees, keep_token_leaves=cfg.ted_keep_token_leaves
            )
        for variant in ("subset", "subtree"):
            if variant in enabled:
                feats[variant] = cohesion.kernel_similarity(
                    triple.source_trees, trees, variant, cfg.kernel_sigma
                )
        if "overlap" in enabled:
            # Content-word overlap of neighboring sentences inside the
            # simplification, averaged over adjacent pairs.
            pairs = [
                cohesion.overlap_coefficient(trees[i].tokens(), trees[i + 1].tokens())
                for i in range(len(trees) - 1)
            ]
            feats["overlap"] = sum(pairs) / len(pairs)
        if "yngve" in enabled:
            feats["yngve"] = float(
                np.mean([complexity.yngve_score(t) for t in trees])
            )
        if "frazier" in enabled:
            feats["frazier"] = float(
                np.mean(
                    [complexity.frazier_score(t, cfg.sentence_prefixes) for t in trees]
                )
            )
        if "tnodes" in enabled:
            feats["tnodes"] = float(
                np.mean(
                    [
                        complexity.tnodes(t, cfg.tnodes_count_token_leaves)
                        for t in trees
                    ]
                )
            )
        if "dep_length" in enabled:
            if not simp.graphs:
                raise ValidationError("dependency parses missing (dep_length enabled)")
            feats["dep_length"] = float(
                np.mean([complexity.dep_distance(g) for g in simp.graphs])
            )
        if enabled & {"dale", "ease", "fk_grade"}:
            stats = readability.text_stats(
                [t.tokens() for t in trees], self._easy_words
            )
            if "dale" in enabled:
                feats["dale"] = readability.dale_chall(stats)
            if "ease" in enabled:
                feats["ease"] = readability.flesch_reading_ease(stats)
            if "fk_grade" in enabled:
                feats["fk_grade"] = readability.fk_grade(stats)
        if "samsa" in enabled:
            if simp.samsa is None:
                raise ValidationError("samsa value missing (samsa enabled)")
            feats["samsa"] = float(simp.samsa)
        return feats


def extract_features(
    triples: Sequence[Triple], config: FeatureConfig | None = None
) -> tuple[list[str], list[list]]:
    """Per-(triple, side) feature table in a stable column order."""
    extractor = FeatureExtractor(config)
    enabled = [
        p for p in SIDE_PREDICTORS if p in set(extractor.config.predictors)
    ]
    header = ["triple_id", "side", *enabled]
    rows: list[list] = []
    for triple in sorted(triples, key=lambda t: t.id):
        for side in ("a", "b"):
            feats = extractor.side_features(triple, side)
            rows.append([triple.id, side, *(feats[p] for p in enabled)])
    return header, rows


@dataclass(frozen=True)
class ColumnMeta:
    kind: str  # "categorical" | "continuous"
    mean: float
    sd: float


@dataclass
class DesignMatrix:
    columns: tuple[str, ...]
    X: np.ndarray  # standardized, shape (n, len(columns))
    y: np.ndarray  # binary outcome, shape (n,)
    meta: dict[str, ColumnMeta]
    row_ids: tuple[tuple, ...] = field(default_factory=tuple)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.columns.index(name)
        except ValueError:
            raise ValidationError(f"no such column {name!r}") from None
        return self.X[:, j]

    def predictor_matrix(self, names: Sequence[str]) -> np.ndarray:
        idx = []
        for name in names:
            if name not in self.columns:
                raise ValidationError(f"no such column {name!r}")
            idx.append(self.columns.index(name))
        return self.X[:, idx]

    def raw_column(self, name: str) -> np.ndarray:
        """Undo the standardization of one column."""
        meta = self.meta[name]
        col = self.column(name)
        if meta.kind == "categorical":
            return col.copy()
        return col * meta.sd + meta.mean

    @classmethod
    def from_arrays(
        cls,
        columns: Sequence[str],
        X: np.ndarray,
        y: np.ndarray,
        categorical: Sequence[str] = CATEGORICAL_PREDICTORS,
        row_ids: Sequence[tuple] | None = None,
    ) -> "DesignMatrix":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(columns):
            raise ValidationError("X shape does not match the column list")
        if y.shape != (X.shape[0],):
            raise ValidationError("y length does not match X")
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise ValidationError("y must be binary")
        categorical = set(categorical)
        Xs = X.copy()
        meta: dict[str, ColumnMeta] = {}
        for j, name in enumerate(columns):
            col = X[:, j]
            if not np.all(np.isfinite(col)):
                raise ValidationError(f"column {name!r} has non-finite values")
            if name in categorical:
                if not np.all(np.isin(col, (0.0, 1.0))):
                    raise ValidationError(
                        f"categorical column {name!r} must be 0/1 valued"
                    )
                meta[name] = ColumnMeta("categorical", 0.0, 1.0)
                continue
            mean = float(col.mean())
            sd = float(col.std())  # population standard deviation
            if sd == 0.0 or not np.isfinite(sd):
                raise StandardizationError(
                    f"column {name!r} has zero variance and cannot be standardized"
                )
            Xs[:, j] = (col - mean) / sd
            meta[name] = ColumnMeta("continuous", mean, sd)
        return cls(
            columns=tuple(columns),
            X=Xs,
            y=y,
            meta=meta,
            row_ids=tuple(row_ids) if row_ids is not None else (),
        )


def build_design_matrix(
    triples: Sequence[Triple],
    judgments: Sequence[JudgmentRecord],
    config: FeatureConfig | None = None,
) -> DesignMatrix:
    """Assemble the standardized predictor matrix from the A-vs-B judgments.

    Long layout (default): one row per (judgment, side); the outcome is 1
    on the chosen side's row and 0 on the other; 'split' marks the
    two-sentence side. The alternative 'diff' layout emits one row per
    judgment with side-a minus side-b feature differences.
    "not_sure" responses are dropped.
    """
    config = config or FeatureConfig()
    extractor = FeatureExtractor(config)
    by_id = {t.id: t for t in triples}
    decided = [
        (i, j)
        for i, j in enumerate(judgments)
        if j.question == "A_vs_B" and j.choice != "not_sure"
    ]
    if not decided:
        raise ValidationError("no definite A_vs_B judgments to build a matrix from")
    decided.sort(key=lambda item: (item[1].triple_id, item[1].worker_id, item[0]))

    names = list(config.predictors)
    raw_rows: list[list[float]] = []
    outcomes: list[float] = []
    row_ids: list[tuple] = []
    for _, j in decided:
        triple = by_id.get(j.triple_id)
        if triple is None:
            raise IntegrityError(f"judgment references unknown triple {j.triple_id!r}")
        per_side = {}
        for side in ("a", "b"):
            feats = dict(extractor.side_features(triple, side))
            scores = j.scores(side)
            for cat in CATEGORIES:
                if cat in names:
                    feats[cat] = float(scores.get(cat))
            per_side[side] = feats
        if config.layout == "long":
            for side in ("a", "b"):
                raw_rows.append([per_side[side][name] for name in names])
                outcomes.append(
                    1.0 if (side == "a") == (j.choice == "first") else 0.0
                )
                row_ids.append((j.triple_id, j.worker_id, side))
        else:
            raw_rows.append(
                [per_side["a"][name] - per_side["b"][name] for name in names]
            )
            outcomes.append(1.0 if j.choice == "first" else 0.0)
            row_ids.append((j.triple_id, j.worker_id, "a-b"))

    categorical = [c for c in CATEGORICAL_PREDICTORS if c in names]
    if config.layout == "diff":
        # Side differences of the flag columns are no longer 0/1.
        categorical = []
    return DesignMatrix.from_arrays(
        names,
        np.array(raw_rows, dtype=float),
        np.array(outcomes, dtype=float),
        categorical=categorical,
        row_ids=row_ids,
    )
