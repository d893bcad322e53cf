"""Decide the abelian order on the whole catalog and summarize the result."""

import argparse
import collections
from dataclasses import dataclass

from markedgroups.abelian import catalog, preceq_abelian


@dataclass
class AbelianSweep:
    max_rank: int = 2
    max_order: int = 12


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rank", type=int, default=2)
    ap.add_argument("--max-order", type=int, default=12)
    args = ap.parse_args()
    cfg = AbelianSweep(args.max_rank, args.max_order)
    cat = catalog(cfg.max_rank, cfg.max_order)
    verdicts = collections.Counter()
    up = collections.Counter()
    for a in cat:
        for b in cat:
            v = preceq_abelian(a, b)
            verdicts[str(v)] += 1
            if v is True and a != b:
                up[str(a)] += 1
    print(f"groups={len(cat)} pairs={len(cat) ** 2} " + " ".join(f"{k}={n}" for k, n in sorted(verdicts.items())))
    for name, n in up.most_common(10):
        print(f"{name}: {n} strict successors")


if __name__ == "__main__":
    main()
