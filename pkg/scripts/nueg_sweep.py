"""Growth signature of lamp wr_X Grig witnesses over a range of radii."""

import argparse
from dataclasses import dataclass

from markedgroups.growthlab import nueg_csv, nueg_signature
from markedgroups.parsing import parse_group


@dataclass
class NuegSweep:
    lamp: str = "Z/2"
    radii: tuple = (1, 2, 3)
    threads: int = 1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lamp", default="Z/2")
    ap.add_argument("--rmax", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    cfg = NuegSweep(args.lamp, tuple(range(1, args.rmax + 1)), args.threads)
    print(nueg_csv(nueg_signature(parse_group(cfg.lamp), cfg.radii, threads=cfg.threads)), end="")


if __name__ == "__main__":
    main()
