"""Command-line front end: list the corpus, analyze one group, verify statements.

Exit codes: 0 no violations, 1 a violation was found, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import classify as C
from . import series as S
from .corpus import (
    SCHEMA_VERSION,
    Corpus,
    build_corpus,
    group_from_record,
    group_record,
    materialize,
    parse_recipe,
    read_corpus,
    read_group,
    write_corpus,
)
from .perm import BudgetError, FiniteGroup, is_prime_power
from .verify import Conclusion, Hypothesis, StatementId, _icphi_flags, verify

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    max_order: int = 64
    statements: tuple[StatementId, ...] = tuple(StatementId)
    corpus: str = "builtin"
    jobs: int = 1
    timings: bool = False


@dataclass
class RunReport:
    config: RunConfig
    corpus_sizes: dict[int, int]
    verdicts: list[dict] = field(default_factory=list)
    seconds: dict[str, float] = field(default_factory=dict)

    @property
    def summary(self) -> dict[str, dict[str, int]]:
        out = {}
        for s in self.config.statements:
            rows = [v for v in self.verdicts if v["statement"] == s.value]
            c = Counter(v["hypothesis"] for v in rows) + Counter(v["conclusion"] for v in rows)
            out[s.value] = {k: c.get(k, 0) for k in ("satisfied", "vacuous", "not-satisfied", "verified", "violated")}
        return out

    @property
    def violations(self) -> int:
        return sum(v["conclusion"] == Conclusion.VIOLATED.value for v in self.verdicts)

    def to_json(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "config": {
                "max_order": self.config.max_order,
                "statements": [s.value for s in self.config.statements],
                "corpus": self.config.corpus,
            },
            "corpus_sizes": {str(k): v for k, v in self.corpus_sizes.items()},
            "summary": self.summary,
            "violations": self.violations,
            "verdicts": self.verdicts,
        }
        if self.config.timings:
            d["seconds"] = {k: round(v, 3) for k, v in self.seconds.items()}
        return d


def _load_corpus(cfg: RunConfig) -> Corpus:
    if cfg.corpus == "builtin":
        return build_corpus(cfg.max_order)
    try:
        corpus = read_corpus(cfg.corpus)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read corpus {cfg.corpus}: {exc}") from exc
    corpus.groups = [m for m in corpus.groups if m.group.order <= cfg.max_order]
    return corpus


def _verify_group(name: str, G: FiniteGroup, statements) -> tuple[list[dict], dict[str, float]]:
    rows, secs = [], {}
    for s in statements:
        t = time.perf_counter()
        rows.append(verify(G, s, name).to_dict())
        secs[s.value] = time.perf_counter() - t
    return rows, secs


def _worker(args):
    name, rec, statements = args
    return _verify_group(name, group_from_record(rec), [StatementId(s) for s in statements])


def run_verify(cfg: RunConfig, corpus: Corpus | None = None) -> RunReport:
    corpus = corpus if corpus is not None else _load_corpus(cfg)
    report = RunReport(cfg, corpus.counts_by_order())
    secs: Counter = Counter()
    if cfg.jobs > 1:
        tasks = [(m.name, group_record(m.group), [s.value for s in cfg.statements]) for m in corpus]
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_worker, tasks, chunksize=4))
    else:
        results = [_verify_group(m.name, m.group, cfg.statements) for m in corpus]
    for rows, s in results:  # corpus order, then statement order
        report.verdicts.extend(rows)
        secs.update(s)
    report.seconds = dict(secs)
    return report


def format_report_text(report: RunReport) -> str:
    lines = [f"corpus: {report.config.corpus}, max order {report.config.max_order}, "
             f"{sum(report.corpus_sizes.values())} groups"]
    lines.append("groups per order: " + " ".join(f"{k}:{v}" for k, v in report.corpus_sizes.items()))
    lines.append("")
    lines.append(f"{'id':<4} {'satisfied':>9} {'vacuous':>7} {'not-sat':>7} {'verified':>8} {'violated':>8}"
                 + ("  seconds" if report.config.timings else ""))
    for sid, c in report.summary.items():
        line = (f"{sid:<4} {c['satisfied']:>9} {c['vacuous']:>7} {c['not-satisfied']:>7} "
                f"{c['verified']:>8} {c['violated']:>8}")
        if report.config.timings:
            line += f"  {report.seconds.get(sid, 0.0):7.2f}"
        lines.append(line)
    bad = [v for v in report.verdicts if v["conclusion"] == Conclusion.VIOLATED.value]
    lines.append("")
    lines.append(f"violations: {len(bad)}")
    for v in bad:
        lines.append(f"  {v['statement']} {v['group_id']}: {v['witness']}")
    return "\n".join(lines) + "\n"


# -- analyze --------------------------------------------------------------------------

def _load_group(arg: str) -> FiniteGroup:
    path = Path(arg)
    if path.suffix == ".json" or path.exists():
        try:
            return read_group(path)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    try:
        return materialize(parse_recipe(arg))
    except (ValueError, KeyError, IndexError, BudgetError, AssertionError) as exc:
        raise UsageError(f"cannot build group {arg!r}: {exc}") from exc


def analyze(G: FiniteGroup) -> dict:
    L = G.lattice
    t = L.top
    flags = _icphi_flags(L)

    def sub(i):
        return {"index": int(i), "order": int(L.orders[i]), "generators": [list(G.elements[g].images) for g in L.subgroups[i].generators]}

    fp = C.fingerprint(G)
    counts = Counter(int(o) for o in L.orders)
    primes = G.primes
    return {
        "name": G.name,
        "order": G.order,
        "degree": G.degree,
        "fingerprint": {
            "element_orders": {str(k): v for k, v in fp.element_orders},
            "center_order": fp.center_order,
            "derived_order": fp.derived_order,
            "abelian_invariants": list(fp.abelianization),
        },
        "predicates": {
            "abelian": C.is_abelian(G),
            "cyclic": C.is_cyclic(G),
            "nilpotent": C.is_nilpotent(G),
            "supersolvable": C.is_supersolvable(G),
            "solvable": C.is_solvable(G),
            "simple": bool(L.orders[t] > 1 and len(L.normal_in(t)) == 2),
            "q8_free": C.is_q8_free(G),
            **{f"{p}-nilpotent": C.is_p_nilpotent(G, p) for p in primes},
        },
        "subgroups": {
            "Phi": sub(L.frattini_of(t)),
            "Z": sub(S._center_index(L, t)),
            "Z_inf": sub(L.index(S.hypercenter(G))),
            "F": sub(S._fitting_index(L, t)),
            "F*": sub(S._gen_fitting_index(L, t)),
            "Z_U": sub(S._u_hypercenter_index(L, t)),
        },
        "subgroup_count": len(L),
        "subgroups_by_order": {str(k): v for k, v in sorted(counts.items())},
        "conjugacy_classes_of_subgroups": len(L.conjugacy_classes),
        "icphi_count": int(flags.sum()),
        "icphi_primary_all": bool(all(flags[i] for i in range(len(L)) if is_prime_power(int(L.orders[i])))),
        "icphi_subgroups": [sub(i) for i in range(len(L)) if flags[i]],
    }


def format_analysis_text(a: dict) -> str:
    lines = [f"group {a['name']}: order {a['order']}, degree {a['degree']}"]
    fp = a["fingerprint"]
    lines.append(f"element orders: {fp['element_orders']}; |Z| = {fp['center_order']}; |G'| = {fp['derived_order']}; "
                 f"G/G' = {fp['abelian_invariants']}")
    for k, v in a["predicates"].items():
        lines.append(f"{k}: {str(v).lower()}")
    for k, v in a["subgroups"].items():
        lines.append(f"{k}: order {v['order']}")
    lines.append(f"subgroups: {a['subgroup_count']} in {a['conjugacy_classes_of_subgroups']} classes; by order {a['subgroups_by_order']}")
    if a["icphi_count"] == a["subgroup_count"]:
        lines.append(f"all {a['subgroup_count']} subgroups ICPhi")
    else:
        lines.append(f"{a['icphi_count']} of {a['subgroup_count']} subgroups ICPhi")
        for s in a["icphi_subgroups"]:
            lines.append(f"  #{s['index']} order {s['order']}")
    return "\n".join(lines) + "\n"


# -- argument handling ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _statement(text: str) -> StatementId:
    try:
        return StatementId(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown statement id {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="icphi", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, corpus=True):
        sp.add_argument("--max-order", type=int, default=64)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out", type=Path)
        if corpus:
            sp.add_argument("--corpus", default="builtin", help="corpus manifest to use instead of the builtin one")

    sp = sub.add_parser("list", help="print corpus members")
    common(sp)
    sp = sub.add_parser("analyze", help="analyze a group file or recipe label, e.g. 'SL(2,3)' or '(C3 : C4)#1'")
    sp.add_argument("group")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out", type=Path)
    sp = sub.add_parser("verify", help="run the statement verifiers over the corpus")
    common(sp)
    sp.add_argument("--statement", type=_statement, action="append")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timings", action="store_true", help="include wall times (not deterministic)")
    sp = sub.add_parser("corpus", help="write the builtin corpus as a manifest")
    sp.add_argument("--max-order", type=int, default=64)
    sp.add_argument("--out", type=Path, required=True)
    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if getattr(args, "max_order", 1) < 1:
            raise UsageError("--max-order must be positive")
        if args.command == "list":
            corpus = _load_corpus(RunConfig(max_order=args.max_order, corpus=args.corpus))
            if args.format == "json":
                text = json.dumps([{"order": m.group.order, "name": m.name, "recipe": m.recipe.label}
                                   for m in corpus], indent=1) + "\n"
            else:
                text = "".join(f"{m.group.order:4d}  {m.name}  {m.recipe.label}\n" for m in corpus)
            _emit(text, args.out)
            return EXIT_OK
        if args.command == "analyze":
            a = analyze(_load_group(args.group))
            _emit(json.dumps(a, indent=1) + "\n" if args.format == "json" else format_analysis_text(a), args.out)
            return EXIT_OK
        if args.command == "corpus":
            write_corpus(build_corpus(args.max_order), args.out)
            return EXIT_OK
        cfg = RunConfig(
            max_order=args.max_order,
            statements=tuple(args.statement) if args.statement else tuple(StatementId),
            corpus=args.corpus,
            jobs=max(1, args.jobs),
            timings=args.timings,
        )
        report = run_verify(cfg)
        text = json.dumps(report.to_json(), indent=1) + "\n" if args.format == "json" else format_report_text(report)
        _emit(text, args.out)
        return EXIT_VIOLATION if report.violations else EXIT_OK
    except (UsageError, BudgetError) as exc:
        print(f"icphi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
