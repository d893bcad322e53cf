"""Certified bisection for the growth exponent alpha."""

import argparse
import json

from markedgroups.growthlab import solve_alpha


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tolerance", type=float, default=1e-12)
    r = solve_alpha(ap.parse_args().tolerance)
    print(json.dumps({**r.to_json(), "certified": r.certified()}, indent=2))


if __name__ == "__main__":
    main()
