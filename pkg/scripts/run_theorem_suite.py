"""Run the statement verifiers over the builtin corpus and write a report.

    python scripts/run_theorem_suite.py --max-order 64 --out report.json
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from icphi.cli import RunConfig, format_report_text, run_verify
from icphi.corpus import build_corpus
from icphi.verify import StatementId

# everything except the two single-group lemmas, which have their own checks
DEFAULT_STATEMENTS = tuple(s for s in StatementId if s not in (StatementId.L15, StatementId.L16))


@dataclass
class SuiteConfig:
    max_order: int = 64
    out: Path | None = None
    jobs: int = 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=SuiteConfig.max_order)
    ap.add_argument("--out", type=Path)
    ap.add_argument("--jobs", type=int, default=1)
    cfg = SuiteConfig(**vars(ap.parse_args(argv)))

    t = time.perf_counter()
    corpus = build_corpus(cfg.max_order)
    built = time.perf_counter() - t
    report = run_verify(RunConfig(max_order=cfg.max_order, statements=DEFAULT_STATEMENTS, jobs=cfg.jobs,
                                  timings=True), corpus)
    total = time.perf_counter() - t
    sys.stdout.write(format_report_text(report))
    print(f"corpus built in {built:.1f}s, total {total:.1f}s")
    for note in corpus.notices:
        print(f"notice: {note}")
    if cfg.out:
        cfg.out.write_text(json.dumps(report.to_json(), indent=1) + "\n")
    return 1 if report.violations else 0


if __name__ == "__main__":
    sys.exit(main())
