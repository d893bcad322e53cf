"""Build and verify the standard witness cases; prints one CSV row per case."""

import argparse
import time
from dataclasses import dataclass, field

from markedgroups.witnesses import verify_witness, witness


@dataclass
class WitnessSweep:
    cases: list = field(default_factory=lambda: [
        ("zm_in_zn", 5, {"m": 1, "n": 2}), ("abelian_step", 4, {"k": 2, "l": 3}),
        ("free_mn", 3, {"m": 2, "n": 3}), ("lamplighter_metab", 2, {"n": 4}),
        ("bs_to_wreath", 2, {"p": 2, "i": 4}), ("any_to_direct", 2, {}),
        ("grig_wreath", 2, {}), ("nil_relfree", 4, {"k": 2, "N": 3}), ("hall_colouring", 2, {})])
    cap: int = 5_000_000
    threads: int = 1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--threads", type=int, default=1)
    cfg = WitnessSweep(threads=ap.parse_args().threads)
    print("case,R,agree,first_divergence,states_explored,seconds")
    for case, R, params in cfg.cases:
        t0 = time.perf_counter()
        rep = verify_witness(witness(case, R, **params), cap=cfg.cap, threads=cfg.threads)
        print(f"{case},{rep['R']},{str(rep['agree']).lower()},{rep['first_divergence']},"
              f"{rep['states_explored']},{time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
