"""Command-line entry point.

Subcommands: ``extract`` (materialize the per-side predictor table),
``fit`` (sample the full preference model and summarize the posterior),
``ablate`` (leave-one-predictor-out WAIC comparison) and ``report``
(descriptive preference tallies and quality-score tables).

Exit codes: 0 ok, 1 validation problem, 2 convergence gate tripped,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import dataset as ds
from . import inference, selection
from .errors import SplitreadError
from .inference import ModelSpec, SamplerConfig

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONVERGENCE = 2
EXIT_IO = 3

REDUCED_PREDICTORS = ("grammar", "split", "ease", "fk_grade", "meaning", "fluency")

PROFILES = {
    "desk": {"chains": 4, "warmup": 1000, "draws": 1000},
    "paper": {"chains": 4, "warmup": 50000, "draws": 4000},
}

_DEFAULT_SAMPLER = {
    "chains": 4,
    "warmup": 1000,
    "draws": 1000,
    "seed": 20240501,
    "target_accept": 0.8,
    "num_steps": 32,
    "prior_sd": 2.5,
}


@dataclass(frozen=True)
class RunConfig:
    triples: str = ""
    judgments: str = ""
    word_list: str | None = None
    out: str = "out"
    predictors: tuple[str, ...] = ds.PREDICTORS
    kernel_sigma: float = 1.0
    layout: str = "long"
    keep_punctuation: bool = True
    sampler: dict = field(default_factory=lambda: dict(_DEFAULT_SAMPLER))

    @property
    def seed(self) -> int:
        return int(self.sampler["seed"])

    def as_dict(self) -> dict:
        return {
            "triples": self.triples,
            "judgments": self.judgments,
            "word_list": self.word_list,
            "out": self.out,
            "predictors": list(self.predictors),
            "kernel_sigma": self.kernel_sigma,
            "layout": self.layout,
            "keep_punctuation": self.keep_punctuation,
            "sampler": dict(sorted(self.sampler.items())),
        }

    def hash(self) -> str:
        canonical = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]

    def header(self) -> str:
        return f"# splitread config={self.hash()} seed={self.seed}"

    def feature_config(self) -> ds.FeatureConfig:
        return ds.FeatureConfig(
            predictors=self.predictors,
            kernel_sigma=self.kernel_sigma,
            word_list=self.word_list,
            layout=self.layout,
        )

    def sampler_config(self) -> SamplerConfig:
        s = self.sampler
        return SamplerConfig(
            chains=int(s["chains"]),
            warmup=int(s["warmup"]),
            draws=int(s["draws"]),
            seed=int(s["seed"]),
            target_accept=float(s["target_accept"]),
            num_steps=int(s["num_steps"]),
        )

    def model_spec(self, predictors: tuple[str, ...] | None = None) -> ModelSpec:
        return ModelSpec(
            predictors=predictors if predictors is not None else self.predictors,
            prior_sd=float(self.sampler["prior_sd"]),
        )


def load_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise SplitreadError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise SplitreadError(f"config file is not valid JSON: {exc}") from None
    sampler = dict(_DEFAULT_SAMPLER)
    sampler.update(data.get("sampler", {}))
    profile = getattr(args, "profile", None)
    if profile:
        sampler.update(PROFILES[profile])
    if getattr(args, "seed", None) is not None:
        sampler["seed"] = int(args.seed)
    predictors = tuple(data.get("predictors", ds.PREDICTORS))
    cfg = RunConfig(
        triples=data.get("triples", ""),
        judgments=data.get("judgments", ""),
        word_list=data.get("word_list"),
        out=data.get("out", "out"),
        predictors=predictors,
        kernel_sigma=float(data.get("kernel_sigma", 1.0)),
        layout=data.get("layout", "long"),
        keep_punctuation=bool(data.get("keep_punctuation", True)),
        sampler=sampler,
    )
    if getattr(args, "triples", None):
        cfg = replace(cfg, triples=args.triples)
    if getattr(args, "judgments", None):
        cfg = replace(cfg, judgments=args.judgments)
    if getattr(args, "out", None):
        cfg = replace(cfg, out=args.out)
    return cfg


def _check_paths(cfg: RunConfig, need_judgments: bool) -> None:
    if not cfg.triples:
        raise SplitreadError("no triples path configured")
    if not Path(cfg.triples).exists():
        raise SplitreadError(f"triples file not found: {cfg.triples}")
    if need_judgments:
        if not cfg.judgments:
            raise SplitreadError("no judgments path configured")
        if not Path(cfg.judgments).exists():
            raise SplitreadError(f"judgments file not found: {cfg.judgments}")
    if cfg.word_list is not None and not Path(cfg.word_list).exists():
        raise SplitreadError(f"word list file not found: {cfg.word_list}")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def cmd_extract(cfg: RunConfig) -> int:
    _check_paths(cfg, need_judgments=False)
    triples = ds.load_triples(cfg.triples, keep_punctuation=cfg.keep_punctuation)
    header, rows = ds.extract_features(triples, cfg.feature_config())
    lines = [cfg.header(), ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    out = Path(cfg.out) / "features.csv"
    _atomic_write(out, "\n".join(lines) + "\n")
    print(f"wrote {out} ({len(rows)} rows)")
    return EXIT_OK


def _fit_matrix(cfg: RunConfig):
    triples, judgments = ds.ingest(
        cfg.judgments, cfg.triples, keep_punctuation=cfg.keep_punctuation
    )
    return ds.build_design_matrix(triples, judgments, cfg.feature_config())


def cmd_fit(cfg: RunConfig) -> int:
    _check_paths(cfg, need_judgments=True)
    matrix = _fit_matrix(cfg)
    draws = inference.sample_posterior(
        matrix, cfg.model_spec(), cfg.sampler_config()
    )
    summary = inference.summarize(draws)

    lines = [
        cfg.header(),
        f"# divergences={draws.divergences} "
        f"accept_rate={','.join(f'{r:.3f}' for r in draws.accept_rate)}",
        "coefficient,mean,sd,hdi_low,hdi_high,rhat",
    ]
    for row in summary.rows:
        lines.append(
            ",".join(
                [
                    row.name,
                    repr(row.mean),
                    repr(row.sd),
                    repr(row.hdi_low),
                    repr(row.hdi_high),
                    repr(row.rhat),
                ]
            )
        )
    out_dir = Path(cfg.out)
    _atomic_write(out_dir / "summary.csv", "\n".join(lines) + "\n")

    hist_lines = [cfg.header(), "coefficient,bin_left,bin_right,count"]
    for name, (edges, counts) in summary.histograms.items():
        for j, count in enumerate(counts):
            hist_lines.append(
                f"{name},{float(edges[j])!r},{float(edges[j + 1])!r},{int(count)}"
            )
    _atomic_write(out_dir / "histograms.csv", "\n".join(hist_lines) + "\n")
    inference.draws_to_csv(draws, out_dir / "draws.csv", cfg.header())

    if draws.divergence_warning:
        print(
            f"warning: {draws.divergences} divergent transitions after warmup",
            file=sys.stderr,
        )
    worst = summary.max_rhat()
    print(f"wrote {out_dir / 'summary.csv'} (max R-hat {worst:.4f})")
    if not summary.converged(selection.RHAT_THRESHOLD):
        print("convergence gate failed: R-hat above 1.05", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_ablate(cfg: RunConfig, reduced: bool, only: tuple[str, ...] | None) -> int:
    _check_paths(cfg, need_judgments=True)
    matrix = _fit_matrix(cfg)
    if only:
        predictors = only
    elif reduced:
        predictors = REDUCED_PREDICTORS
    else:
        predictors = cfg.predictors
    missing = [p for p in predictors if p not in matrix.columns]
    if missing:
        raise SplitreadError(f"predictors not in the design matrix: {missing}")
    table = selection.ablate(
        matrix, cfg.model_spec(predictors), cfg.sampler_config()
    )
    out_dir = Path(cfg.out)
    _atomic_write(
        out_dir / "ablation.csv",
        "\n".join([cfg.header(), *table.to_csv_lines()]) + "\n",
    )
    _atomic_write(
        out_dir / "ablation.txt",
        "\n".join([cfg.header(), *table.to_text_lines()]) + "\n",
    )
    print(f"wrote {out_dir / 'ablation.csv'} ({len(table.rows)} rows)")
    return EXIT_OK


def _tally_block(
    title: str,
    label: str,
    judgments: list[ds.JudgmentRecord],
    question: str,
) -> list[str]:
    lines = [f"## {title}"]
    subset = [j for j in judgments if j.question == question]
    if not subset:
        lines.append(f"(no responses for {label}; table omitted)")
        lines.append("")
        return lines
    t = ds.tally(subset, question)
    lines.append(f"{label} | {t.cells()}")
    lines.append("")
    return lines


def _score_block(
    title: str,
    head_a: str,
    head_b: str,
    judgments: list[ds.JudgmentRecord],
) -> list[str]:
    lines = [f"## {title}"]
    if not judgments:
        lines.append("(no responses; table omitted)")
        lines.append("")
        return lines
    comparison = ds.score_summary(
        ds.quality_scores(judgments, "a"), ds.quality_scores(judgments, "b")
    )
    lines.append(f"category | {head_a} | {head_b}")
    for cat in ds.CATEGORIES:
        c = comparison[cat]
        marker = "**" if c.p_value < 0.01 else ""
        lines.append(
            f"{marker}{cat} | {c.mean_a:.2f} ({c.sd_a:.2f}) | "
            f"{c.mean_b:.2f} ({c.sd_b:.2f})"
        )
    lines.append("")
    return lines


def cmd_report(cfg: RunConfig) -> int:
    _check_paths(cfg, need_judgments=True)
    triples, judgments = ds.ingest(
        cfg.judgments, cfg.triples, keep_punctuation=cfg.keep_punctuation
    )
    origin = {t.id: t.split_a.origin for t in triples}
    bart = [j for j in judgments if origin[j.triple_id] == "bart"]
    human = [j for j in judgments if origin[j.triple_id] == "human"]

    lines = [cfg.header(), "# Readability preference report", ""]
    lines += _tally_block(
        "Source vs two-sentence split (model output)", "<S, BART-A>", bart, "S_vs_A"
    )
    lines += _tally_block(
        "Source vs three-sentence split (model-output items)",
        "<S, HUM-B>",
        bart,
        "S_vs_B",
    )
    lines += _tally_block(
        "Source vs two-sentence split (manual)", "<S, HUM-A>", human, "S_vs_A"
    )
    lines += _tally_block(
        "Source vs three-sentence split (manual items)", "<S, HUM-B>", human, "S_vs_B"
    )
    lines += _tally_block(
        "Two- vs three-sentence split (model output)",
        "<BART-A, HUM-B>",
        bart,
        "A_vs_B",
    )
    lines += _tally_block(
        "Two- vs three-sentence split (manual)", "<HUM-A, HUM-B>", human, "A_vs_B"
    )
    lines += _score_block(
        "Quality scores, manual splits (** = p < 0.01)", "HUM-A", "HUM-B", human
    )
    lines += _score_block(
        "Quality scores, model vs manual (** = p < 0.01)", "BART-A", "HUM-B", bart
    )
    out = Path(cfg.out) / "report.txt"
    _atomic_write(out, "\n".join(lines) + "\n")
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitread",
        description="Sentence-split readability workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("extract", "write the per-(triple, side) predictor table"),
        ("fit", "fit the preference model and summarize the posterior"),
        ("ablate", "leave-one-predictor-out WAIC comparison"),
        ("report", "descriptive tallies and quality-score tables"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--triples", help="triples.jsonl path (overrides config)")
        p.add_argument("--judgments", help="judgments.jsonl path (overrides config)")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="sampler base seed")
        p.add_argument(
            "--profile", choices=sorted(PROFILES), help="sampler size preset"
        )
        if name == "ablate":
            p.add_argument(
                "--reduced",
                action="store_true",
                help="ablate the reduced six-predictor battery",
            )
            p.add_argument(
                "--predictors",
                help="comma-separated predictor subset to ablate",
            )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "extract":
            return cmd_extract(cfg)
        if args.command == "fit":
            return cmd_fit(cfg)
        if args.command == "ablate":
            only = None
            if args.predictors:
                only = tuple(p.strip() for p in args.predictors.split(",") if p.strip())
            return cmd_ablate(cfg, reduced=args.reduced, only=only)
        if args.command == "report":
            return cmd_report(cfg)
        raise SplitreadError(f"unknown command {args.command!r}")
    except SplitreadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
