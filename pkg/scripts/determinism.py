"""Run CLI commands repeatedly with different thread counts and compare results."""

import contextlib
import io
import json
import sys
from dataclasses import dataclass, field

from markedgroups.cli import run


@dataclass
class DeterminismCheck:
    commands: list = field(default_factory=lambda: [
        ["ball", "BS(1,2)", "-R", "5"], ["ball", "Grig", "-R", "6"],
        ["witness", "abelian_step", "--k", "2", "--l", "3", "-R", "4"],
        ["witness", "nil_relfree", "-R", "4"], ["discriminate", "--k", "2", "--N", "3", "-R", "4"],
        ["distinctive", "(x y)^4"], ["order-abelian", "--catalog", "--format", "csv"]])
    threads: tuple = ("1", "1", "1", "8")


def _result(text):
    try:
        res = json.loads(text)["result"]
    except ValueError:
        return text
    if isinstance(res, dict):
        res.pop("millis", None)
    return json.dumps(res, sort_keys=True)


def main():
    cfg = DeterminismCheck()
    ok = True
    for argv in cfg.commands:
        outs = set()
        for t in cfg.threads:
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                run(argv + ["--threads", t])
            outs.add(_result(buf.getvalue()))
        same = len(outs) == 1
        ok &= same
        print(f"{' '.join(argv)}: {'identical' if same else 'DIFFERENT'}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
