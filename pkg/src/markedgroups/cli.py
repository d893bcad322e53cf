"""Command-line front end.  Exit codes: 0 success or verdict true, 1 verdict false, 2 error."""

import argparse
import json
import sys
import time
from fractions import Fraction
from itertools import product

from . import __version__
from .config import RunConfig

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


# ------------------------------------------------------------- plumbing

def _marked(descriptor, gens):
    from .marked import MarkedGroup
    from .parsing import parse_group
    model = parse_group(descriptor)
    if gens is None:
        return MarkedGroup.standard(model)
    return MarkedGroup.from_text(model, gens)


def _int_list(text):
    return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _subsets(text):
    """'5,7;5;' -> [{5,7},{5},set()]."""
    return [set(_int_list(part)) for part in text.split(";")]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, Fraction):
        return str(x)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def _dump(obj):
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


class _Run:
    def __init__(self, cfg):
        self.cfg = cfg
        self.timings = {}

    def timed(self, name, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        self.timings[name] = round(1000 * (time.perf_counter() - t0), 3)
        return out

    def report(self, result, text=None, csv=None):
        cfg = self.cfg
        if cfg.format == "json":
            body = _dump({"tool_version": __version__, "config": cfg.to_json(),
                          "timings": self.timings, "result": result})
        elif cfg.format == "csv":
            body = csv if csv is not None else _dump(result)
        else:
            body = text if text is not None else _dump(result)
        body = body.rstrip("\n") + "\n"
        if cfg.output and cfg.command not in ("ball", "colouring"):
            with open(cfg.output, "w") as fh:
                fh.write(body)
        sys.stdout.write(body)


# ------------------------------------------------------------- commands

def cmd_ball(run, a):
    from .balls import ball
    mg = _marked(a.group, a.gens)
    c = run.timed("ball", ball, mg, a.R, run.cfg.cap, run.cfg.threads)
    if run.cfg.output:
        with open(run.cfg.output, "wb") as fh:
            fh.write(c.to_bytes())
    counts = c.counts()
    run.report({"states": len(c), "counts": counts, "certificate": c.to_json()},
               text=f"states={len(c)}")
    return EXIT_OK


def cmd_compare(run, a):
    from .balls import ball, balls_agree, first_divergence
    m1, m2 = _marked(a.group1, a.gens1), _marked(a.group2, a.gens2)
    c1 = run.timed("ball1", ball, m1, a.R, run.cfg.cap, run.cfg.threads)
    c2 = run.timed("ball2", ball, m2, a.R, run.cfg.cap, run.cfg.threads)
    agree = balls_agree(c1, c2)
    fd = None if agree else first_divergence(c1, c2)
    run.report({"agree": agree, "first_divergence": fd, "nu1": len(c1), "nu2": len(c2)},
               text=f"agree={str(agree).lower()}")
    return EXIT_OK if agree else EXIT_FALSE


def cmd_girth(run, a):
    from .balls import girth
    mg = _marked(a.group, a.gens)
    g = run.timed("girth", girth, mg, a.rmax, run.cfg.cap)
    run.report({"girth": g.value, "bound": g.bound, "exceeds": g.exceeds},
               text=f"girth={g}")
    return EXIT_OK


def cmd_growth(run, a):
    from .balls import growth
    mg = _marked(a.group, a.gens)
    t = run.timed("growth", growth, mg, a.R, run.cfg.cap, run.cfg.threads)
    run.report({"counts": t.counts, "rate_upper": t.rate_text(),
                "submultiplicative": t.submultiplicative()},
               text=f"counts={','.join(map(str, t.counts))} rate_upper={t.rate_text()}",
               csv=t.to_csv())
    return EXIT_OK


def cmd_relations(run, a):
    from .balls import relations_up_to
    mg = _marked(a.group, a.gens)
    rels = run.timed("relations", relations_up_to, mg, a.L, run.cfg.cap)
    names = mg.label_names() if mg.is_standard() else None
    names = mg.model.gen_names() if mg.is_standard() else names
    texts = [w.to_text(names) for w in rels]
    run.report({"relations": texts}, text="\n".join(texts) if texts else "(none)")
    return EXIT_OK


_WITNESS_KEYS = ("k", "l", "m", "n", "p", "i", "N", "A", "B", "C", "G", "H")


def _witness_params(a):
    out = {}
    for key in _WITNESS_KEYS:
        v = getattr(a, "w_" + key)
        if v is not None:
            out[key] = int(v) if v.lstrip("-").isdigit() else v
    return out


def cmd_witness(run, a):
    from .witnesses import verify_witness, witness
    w = run.timed("construct", witness, a.case, a.R, **_witness_params(a))
    R = a.verify_radius if a.verify_radius is not None else w.radius
    rep = run.timed("verify", verify_witness, w, R, run.cfg.cap, run.cfg.threads)
    run.report(rep, text=f"agree={str(rep['agree']).lower()}")
    return EXIT_OK if rep["agree"] else EXIT_FALSE


def cmd_transport(run, a):
    from .words import parse_word
    from .marked import _split_top
    from .witnesses import transport_target_marking, verify_witness, witness
    w = run.timed("construct", witness, a.case, a.R, **_witness_params(a))
    tgt = w.target
    names = tgt.model.gen_names() if tgt.is_standard() else None
    words = [parse_word(t.strip(), tgt.arity, names) for t in _split_top(a.words)]
    tw = run.timed("transport", transport_target_marking, w, words)
    rep = run.timed("verify", verify_witness, tw, tw.radius, run.cfg.cap, run.cfg.threads)
    run.report(rep, text=f"radius={tw.radius} agree={str(rep['agree']).lower()}")
    return EXIT_OK if rep["agree"] else EXIT_FALSE


def cmd_order_abelian(run, a):
    from .abelian import catalog, parse_abelian, preceq_abelian
    if a.catalog:
        cat = catalog()
        rows = ["A,B,verdict,method"]
        for x, y in product(cat, cat):
            v, m = preceq_abelian(x, y, explain=True)
            rows.append(f"{x},{y},{str(v).lower()},{m}")
        run.report({"pairs": len(rows) - 1}, text="\n".join(rows), csv="\n".join(rows))
        return EXIT_OK
    if a.A is None or a.B is None:
        raise CliError("order-abelian needs two descriptors or --catalog")
    A, B = parse_abelian(a.A), parse_abelian(a.B)
    v, method = run.timed("preceq", preceq_abelian, A, B, explain=True)
    run.report({"A": str(A), "B": str(B), "verdict": v, "method": method},
               text=str(v).lower())
    return EXIT_OK if v is True else EXIT_FALSE


def cmd_poset(run, a):
    from .abelian import poset_from_subsets, preceq_abelian
    primes = _int_list(a.primes)
    n = len(primes)
    subsets = [frozenset(i + 1 for i in range(n) if mask >> i & 1) for mask in range(2 ** n)]
    groups = poset_from_subsets(primes, subsets)
    rows, agree = [], True
    for u, v in product(subsets, subsets):
        verdict = preceq_abelian(groups[u], groups[v])
        expect = v <= u
        agree &= verdict is expect
        rows.append({"U": sorted(u), "V": sorted(v), "preceq": verdict, "reverse_inclusion": expect})
    csv = "U,V,preceq,reverse_inclusion\n" + "".join(
        f"{' '.join(map(str, r['U']))},{' '.join(map(str, r['V']))},"
        f"{str(r['preceq']).lower()},{str(r['reverse_inclusion']).lower()}\n" for r in rows)
    run.report({"primes": primes, "pairs": len(rows), "matches_reverse_inclusion": agree,
                "rows": rows}, text=f"matches_reverse_inclusion={str(agree).lower()}", csv=csv)
    return EXIT_OK if agree else EXIT_FALSE


def _theta(text):
    """'m,n,p;m,n,p' -> {(m,n): p}."""
    out = {}
    for part in text.split(";"):
        if part.strip():
            m, n, p = _int_list(part)
            out[(m, n)] = p
    return out


def cmd_colouring(run, a):
    from .hall import universal_colouring
    thetas = [_theta(t) for t in a.theta]
    seed = _int_list(a.seed_steps) if a.seed_steps else []
    phi = run.timed("construct", universal_colouring, _int_list(a.primes), thetas, seed)
    data = phi.dumps()
    if run.cfg.output:
        with open(run.cfg.output, "w") as fh:
            fh.write(data + "\n")
    run.report({"name": phi.name, "colouring": phi.to_json(),
                "replay_matches": phi.replay() == phi.assignments},
               text=f"colouring {phi.name} with {len(phi.assignments)} assignments")
    return EXIT_OK


def cmd_hall(run, a):
    from .hall import HallWitnessError, hall_witness, load_colouring, realize_finite_poset, \
        verify_hall_witness
    if a.subsets is not None:
        res = run.timed("realize", realize_finite_poset, _subsets(a.subsets), a.R, a.R)
        verdicts = [[c["verdict"] for c in row] for row in res["verdicts"]]
        expect = [[set(b) <= set(x) for b in res["sets"]] for x in res["sets"]]
        ok = verdicts == expect
        run.report({"sets": res["sets"], "verdicts": res["verdicts"],
                    "colourings": [p.name for p in res["colourings"]], "as_expected": ok},
                   text="\n".join(" ".join("1" if v else "0" for v in row) for row in verdicts))
        return EXIT_OK if ok else EXIT_FALSE
    if a.phi is None or a.psi is None:
        raise CliError("hall needs --phi and --psi, or --subsets")
    phi, psi = load_colouring(a.phi), load_colouring(a.psi)
    try:
        w = run.timed("construct", hall_witness, phi, psi, a.R)
    except HallWitnessError as exc:
        run.report({"agree": False, "reason": str(exc)}, text=f"agree=false ({exc})")
        return EXIT_FALSE
    rep = run.timed("verify", verify_hall_witness, w, a.R, run.cfg.cap)
    rep["matrix"] = [list(r) for r in w.matrix]
    run.report(rep, text=f"agree={str(rep['agree']).lower()}")
    return EXIT_OK if rep["agree"] else EXIT_FALSE


def cmd_discriminate(run, a):
    from .identities import discriminating_tuple
    d = run.timed("search", discriminating_tuple, a.k, a.N, a.R, a.C0, cap=run.cfg.cap)
    run.report({"rows": d["rows"], "C": d["C"], "radius": d["radius"], "retried": d["tried"]},
               text=f"C={d['C']} rows={d['rows']}")
    return EXIT_OK


def cmd_distinctive(run, a):
    from .identities import check_distinctive, distinctive_tuple
    from .words import parse_word
    w = parse_word(a.word, a.k, a.vars.split(",") if a.vars else None)
    d = run.timed("search", distinctive_tuple, w, a.k)
    ok = check_distinctive(w, d["tuple"])
    run.report({"tuple": d["tuple"], "points": d["points"], "verified": ok},
               text=" ".join(d["tuple"]))
    return EXIT_OK if ok else EXIT_FALSE


def cmd_sentence(run, a):
    from .identities import evaluate_sentence_on_ball
    from .words import parse_sentence
    mg = _marked(a.group, a.gens)
    s = parse_sentence(a.sentence)
    res = run.timed("search", evaluate_sentence_on_ball, mg, s, a.rho, run.cfg.cap)
    out = {"holds_on_ball": res["holds_on_ball"]}
    if not res["holds_on_ball"]:
        names = mg.model.gen_names() if mg.is_standard() else mg.label_names()
        from .words import Word
        out["witness"] = {v: Word(w, mg.arity).to_text(names)
                          for v, w in zip(res["names"], res["words"])}
    run.report(out, text=f"holds_on_ball={str(res['holds_on_ball']).lower()}")
    return EXIT_OK if res["holds_on_ball"] else EXIT_FALSE


def cmd_merge(run, a):
    from .identities import merge_identities
    from .words import parse_word
    names = a.vars.split(",")
    ws = [parse_word(t, len(names), names) for t in a.words]
    m = run.timed("merge", merge_identities, ws)
    run.report({"word": m.to_text(names), "length": len(m)}, text=m.to_text(names))
    return EXIT_OK


def cmd_smallcancel(run, a):
    from .marked import _split_top
    from .smallcancel import small_cancellation_words, verify_small_cancellation
    from .words import parse_word
    lam = Fraction(a.lam)
    names = a.vars.split(",")
    if a.generate:
        count, min_len = _int_list(a.generate)
        ws = run.timed("generate", small_cancellation_words, len(names), count, min_len, lam)
    else:
        if not a.words:
            raise CliError("smallcancel needs words or --generate COUNT,MIN_LEN")
        ws = [parse_word(t.strip(), len(names), names) for t in _split_top(a.words)]
    rep = run.timed("verify", verify_small_cancellation, ws, lam)
    run.report({"words": [w.to_text(names) for w in ws], "ok": rep.ok,
                "max_piece": rep.max_piece, "min_len": rep.min_len, "lambda": lam},
               text=f"ok={str(rep.ok).lower()} max_piece={rep.max_piece} min_len={rep.min_len}")
    return EXIT_OK if rep.ok else EXIT_FALSE


def cmd_alpha(run, a):
    from .growthlab import solve_alpha
    r = run.timed("solve", solve_alpha, a.tol)
    run.report(dict(r.to_json(), certified=r.certified()), text=f"alpha={r.alpha:.12f}")
    return EXIT_OK if r.certified() else EXIT_FALSE


def cmd_nueg(run, a):
    from .growthlab import nueg_csv, nueg_signature
    from .parsing import parse_group
    rows = run.timed("sweep", nueg_signature, parse_group(a.lamp), _int_list(a.R),
                     run.cfg.cap, run.cfg.threads)
    for r in rows:
        r.pop("millis")
    ok = all(r["agree"] for r in rows)
    csv = nueg_csv(rows)
    run.report({"rows": rows}, text=csv, csv=csv)
    return EXIT_OK if ok else EXIT_FALSE


# --------------------------------------------------------------- parser

def _add_gens(p, *names):
    for n in names or ("gens",):
        p.add_argument(f"--{n}", default=None, help="comma-separated words over the built-in generators")


def _add_witness_params(p):
    p.add_argument("case")
    p.add_argument("-R", type=int, required=True, help="design radius")
    for key in _WITNESS_KEYS:
        p.add_argument(f"--{key}", dest="w_" + key, default=None)


def build_parser():
    ap = argparse.ArgumentParser(prog="markedgroups", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="state cap for ball searches")
    common.add_argument("--budget", type=int, default=3)
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    common.add_argument("-o", "--output", default=None)
    common.add_argument("--format", default="json", choices=["json", "csv", "text"])
    common.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("ball", cmd_ball, "radius-R ball certificate")
    p.add_argument("group"); _add_gens(p); p.add_argument("-R", type=int, required=True)
    p = add("compare", cmd_compare, "compare two marked balls")
    p.add_argument("group1"); p.add_argument("group2"); _add_gens(p, "gens1", "gens2")
    p.add_argument("-R", type=int, required=True)
    p = add("girth", cmd_girth, "girth up to 2*rmax")
    p.add_argument("group"); _add_gens(p); p.add_argument("--rmax", type=int, required=True)
    p = add("growth", cmd_growth, "growth counts")
    p.add_argument("group"); _add_gens(p); p.add_argument("-R", type=int, required=True)
    p = add("relations", cmd_relations, "relations up to length L")
    p.add_argument("group"); _add_gens(p); p.add_argument("-L", type=int, required=True)
    p = add("witness", cmd_witness, "build and verify a witness case")
    _add_witness_params(p); p.add_argument("--verify-radius", type=int, default=None)
    p = add("transport", cmd_transport, "transport a witness to new target generators")
    _add_witness_params(p); p.add_argument("--words", required=True)
    p = add("order-abelian", cmd_order_abelian, "decide A precedes B for abelian groups")
    p.add_argument("A", nargs="?"); p.add_argument("B", nargs="?")
    p.add_argument("--catalog", action="store_true")
    p = add("poset", cmd_poset, "subset poset of abelian groups over given primes")
    p.add_argument("--primes", required=True)
    p = add("colouring", cmd_colouring, "build a universal prime colouring")
    p.add_argument("--primes", required=True)
    p.add_argument("--theta", action="append", default=[], help="'m,n,p;...' (repeatable)")
    p.add_argument("--seed-steps", default=None, help="1-based steps placed in Gamma(2)")
    p = add("hall", cmd_hall, "Hall-group witnesses and finite posets")
    p.add_argument("--phi"); p.add_argument("--psi")
    p.add_argument("--subsets", default=None, help="'5,7;5' (subsets of primes other than 2,3)")
    p.add_argument("-R", type=int, default=2)
    p = add("discriminate", cmd_discriminate, "discriminating tuple in N_{2,k}")
    p.add_argument("--k", type=int, required=True); p.add_argument("--N", type=int, required=True)
    p.add_argument("-R", type=int, required=True); p.add_argument("--C0", type=int, default=2)
    p = add("distinctive", cmd_distinctive, "Grigorchuk tuple on which a word does not vanish")
    p.add_argument("word"); p.add_argument("--k", type=int, default=3)
    p.add_argument("--vars", default="x,y,z")
    p = add("sentence", cmd_sentence, "check a universal sentence on a ball")
    p.add_argument("group"); p.add_argument("sentence"); _add_gens(p)
    p.add_argument("--rho", type=int, required=True)
    p = add("merge", cmd_merge, "merge identities into one")
    p.add_argument("words", nargs="+"); p.add_argument("--vars", default="x,y")
    p = add("smallcancel", cmd_smallcancel, "C'(lambda) verification or generation")
    p.add_argument("words", nargs="?"); p.add_argument("--vars", default="x,y")
    p.add_argument("--lam", default="1/6"); p.add_argument("--generate", default=None)
    p = add("alpha", cmd_alpha, "root of 2^(3-3/a)+2^(2-2/a)+2^(1-1/a)=2")
    p.add_argument("--tol", type=float, default=1e-12)
    p = add("nueg", cmd_nueg, "growth signature of lamp wr_X Grig witnesses")
    p.add_argument("lamp"); p.add_argument("-R", default="1,2")
    return ap


def _config(a):
    skip = {"fn", "command", "cap", "budget", "threads", "output", "format", "seed"}
    params = {k: v for k, v in sorted(vars(a).items()) if k not in skip}
    kw = {"command": a.command, "params": params, "budget": a.budget, "output": a.output,
          "format": a.format, "seed": a.seed}
    if a.cap is not None:
        kw["cap"] = a.cap
    if a.threads is not None:
        kw["threads"] = a.threads
    return RunConfig(**kw)


def run(argv=None):
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        cfg = _config(a)
        return a.fn(_Run(cfg), a)
    except Exception as exc:  # every failure becomes a diagnostic and exit code 2
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
