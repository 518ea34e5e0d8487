"""Print the corpus size per order next to the number of groups of that order.

The reference counts are the standard census of groups up to isomorphism;
the corpus is not expected to reach them at every order.
"""

import argparse
import time

from icphi.corpus import build_corpus

CENSUS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5, 13: 1, 14: 2, 15: 1,
          16: 14, 17: 1, 18: 5, 19: 1, 20: 5, 21: 2, 22: 2, 23: 1, 24: 15, 25: 2, 26: 2, 27: 5, 28: 4,
          29: 1, 30: 4, 31: 1, 32: 51, 33: 1, 34: 2, 35: 1, 36: 14, 37: 1, 38: 2, 39: 2, 40: 14, 41: 1,
          42: 6, 43: 1, 44: 4, 45: 2, 46: 2, 47: 1, 48: 52, 49: 2, 50: 5, 51: 1, 52: 5, 53: 1, 54: 15,
          55: 2, 56: 13, 57: 2, 58: 2, 59: 1, 60: 13, 61: 1, 62: 2, 63: 4, 64: 267}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=64)
    ap.add_argument("--rounds", type=int, default=2)
    args = ap.parse_args(argv)
    t = time.perf_counter()
    c = build_corpus(args.max_order, rounds=args.rounds)
    counts = c.counts_by_order()
    short = 0
    for n in range(1, args.max_order + 1):
        have, want = counts.get(n, 0), CENSUS.get(n)
        mark = "" if want is None or have == want else "  (short)"
        short += mark != ""
        print(f"{n:4d} {have:5d} / {want if want is not None else '?'}{mark}")
    print(f"{len(c)} groups, {short} orders short, {time.perf_counter() - t:.1f}s")
    for note in c.notices:
        print(f"notice: {note}")


if __name__ == "__main__":
    main()
