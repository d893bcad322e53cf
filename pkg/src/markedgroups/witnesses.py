"""Explicit generating-set families S_R witnessing G -> H, checked by ball equality.

A Witness bundles a source marking (of G, built for a design radius) with a
fixed target marking (of H).  ``verify_witness`` compares the two radius-R
ball certificates literally.  Every case records the free choices it made in
``params`` so that a report can be reproduced from the parameters alone.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Callable

from . import grigorchuk as grig
from .abelian import AbelianNF, kernel_shear, preceq_abelian
from .balls import DEFAULT_CAP, ball, ball_words, balls_agree, first_divergence
from .marked import GenerationError, MarkedGroup
from .models import (BaumslagSolitar, Direct, FinAbelian, Free, FreeMetabelian, FreeProd,
                     Grigorchuk, NilC2, PermWreathGrig, Wreath)
from .smallcancel import small_cancellation_words, verify_small_cancellation
from .words import Word, commutator


class WitnessError(ValueError):
    pass


@dataclass
class Witness:
    case: str
    params: dict
    radius: int
    source: MarkedGroup
    target: MarkedGroup
    factory: Callable = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.source.arity != self.target.arity:
            raise WitnessError(f"source marks {self.source.arity} elements, "
                               f"target marks {self.target.arity}")

    def at(self, R):
        """The same construction rebuilt for design radius R."""
        if self.factory is None:
            raise WitnessError(f"{self.case} has no factory")
        return self.factory(R)


# ------------------------------------------------------------- helpers

def _std(model):
    return MarkedGroup.standard(model)


def _require(cond, msg):
    if not cond:
        raise WitnessError(msg)


def _lamp_orders(model):
    """Orders of the built-in generators (0 for infinite order)."""
    return [model.gen_order(i) for i in range(model.ngens())]


def _words_in_ball(mg, elems, max_radius=12, cap=DEFAULT_CAP):
    """Shortlex words (over the marking of mg) reaching each element, by growing balls."""
    for r in range(0, max_radius + 1):
        c = ball(mg, r, cap)
        idx = {g: i for i, g in enumerate(c.elements)}
        if all(e in idx for e in elems):
            ws = ball_words(c)
            return [Word(ws[idx[e]], mg.arity) for e in elems]
    raise WitnessError(f"elements not found within radius {max_radius}")


def _sphere_element(model, r, cap=DEFAULT_CAP):
    """First element (BFS order, standard marking) of norm exactly r, with its word."""
    c = ball(_std(model), r, cap)
    for i, n in enumerate(c.norms):
        if n == r:
            return c.elements[i], Word(ball_words(c)[i], c.arity)
    raise WitnessError(f"{model.descriptor()} has no element of norm {r}")


def _spread_points(model, k, sep, cap=DEFAULT_CAP):
    """k elements (identity first) of the base, pairwise at distance > sep."""
    if k == 1:
        return [model.identity()]
    rad = sep * k + 1
    c = ball(_std(model), rad, cap)
    index = {g: i for i, g in enumerate(c.elements)}

    def far(x, y):
        j = index.get(model.mul(model.inv(x), y))
        return j is None or c.norms[j] > sep

    chosen = [model.identity()]
    for g in c.elements:
        if all(far(x, g) for x in chosen):
            chosen.append(g)
            if len(chosen) == k:
                return chosen
    raise WitnessError(f"{model.descriptor()} has no {k} points at mutual distance > {sep}")


# ---------------------------------------------------------------- cases

def zm_in_zn(m, n, R):
    """Z^m marked by e_1..e_m, M e_1, ..., M^(n-m) e_1 with M = 2R+1, against Z^n."""
    _require(1 <= m <= n, "need 1 <= m <= n")
    _require(R >= 0, "R must be nonnegative")
    M = 2 * R + 1
    src = FinAbelian([0] * m)
    elems = list(src.gens()) + [src.element([M ** j] + [0] * (m - 1)) for j in range(1, n - m + 1)]
    return Witness("zm_in_zn", {"m": m, "n": n, "multiplier": M}, R,
                   MarkedGroup(src, elements=elems), _std(FinAbelian([0] * n)),
                   lambda r: zm_in_zn(m, n, r))


def abelian_step(k, l, R):
    """Z/(kl) + Z marked by (l e1, e2, e1 + R e2), against Z/k + Z^2."""
    _require(k >= 2 and l >= 2, "need k >= 2 and l >= 2")
    _require(R >= 1, "R must be positive")
    src = FinAbelian([k * l, 0])
    elems = [src.element([l, 0]), src.element([0, 1]), src.element([1, R])]
    return Witness("abelian_step", {"k": k, "l": l}, R,
                   MarkedGroup(src, elements=elems), _std(FinAbelian([k, 0, 0])),
                   lambda r: abelian_step(k, l, r))


def free_mn(m, n, R):
    """F_m marked by a basis and n-m C'(1/6) words of length > 2R, against F_n."""
    _require(1 <= m <= n, "need 1 <= m <= n")
    _require(m >= 2 or m == n, "small cancellation words need m >= 2")
    extra = small_cancellation_words(m, n - m, 2 * R + 1) if n > m else []
    words = [Word.gen(i + 1, m) for i in range(m)] + list(extra)
    params = {"m": m, "n": n, "words": [w.to_text(Free(m).gen_names()) for w in extra]}
    return Witness("free_mn", params, R, MarkedGroup(Free(m), words=words), _std(Free(n)),
                   lambda r: free_mn(m, n, r))


def free_pad(G, m, R):
    """G * F_m marked by g_i w_i and a basis of F_m, against F_(k+m)."""
    _require(m >= 2, "need m >= 2")
    k = G.ngens()
    model = FreeProd(G, Free(m))
    ws = small_cancellation_words(m, k, 2 * R + 1)
    elems = [model.mul(model.embed(0, g), model.embed(1, Free(m).eval_word(w)))
             for g, w in zip(G.gens(), ws)]
    elems += [model.embed(1, t) for t in Free(m).gens()]
    # g_i = (g_i w_i) w_i^-1 with w_i spelled in the basis letters k+1..k+m
    cert = {i: Word((i + 1,) + tuple(-(abs(x) + k) if x > 0 else abs(x) + k
                                     for x in reversed(w.letters)), k + m)
            for i, w in enumerate(ws)}
    src = MarkedGroup(model, elements=elems, certificate=cert)
    params = {"G": G.descriptor(), "m": m, "words": [w.to_text(Free(m).gen_names()) for w in ws]}
    return Witness("free_pad", params, R, src, _std(Free(k + m)),
                   lambda r: free_pad(G, m, r))


def wreath_split(A, B, C, R):
    """(A*B) wr C with the B-lamps moved to a point x of norm R+1, against (A x B) wr C."""
    x, xw = _sphere_element(C, R + 1)
    model = Wreath(FreeProd(A, B), C)
    e = C.identity()
    elems = ([model.lamp_at(e, model.lamp.embed(0, s)) for s in A.gens()]
             + [model.lamp_at(x, model.lamp.embed(1, t)) for t in B.gens()]
             + [model.head(u) for u in C.gens()])
    params = {"A": A.descriptor(), "B": B.descriptor(), "C": C.descriptor(),
              "x": xw.to_text(C.gen_names())}
    return Witness("wreath_split", params, R, MarkedGroup(model, elements=elems),
                   _std(Wreath(Direct(A, B), C)), lambda r: wreath_split(A, B, C, r))


def any_to_direct(A, C, R):
    """A wr C with a_i supported at points x_i pairwise at distance > 2R, against (prod C_e_i) wr C."""
    orders = _lamp_orders(A)
    _require(all(o != 1 for o in orders), "lamp generators must be nontrivial")
    pts = _spread_points(C, A.ngens(), 2 * R)
    model = Wreath(A, C)
    elems = ([model.lamp_at(p, a) for p, a in zip(pts, A.gens())]
             + [model.head(u) for u in C.gens()])
    words = _words_in_ball(_std(C), pts, max_radius=2 * R * A.ngens() + 2)
    params = {"A": A.descriptor(), "C": C.descriptor(), "orders": orders,
              "points": [w.to_text(C.gen_names()) for w in words]}
    return Witness("any_to_direct", params, R, MarkedGroup(model, elements=elems),
                   _std(Wreath(FinAbelian(orders), C)), lambda r: any_to_direct(A, C, r))


# -------------------------------------------------- Grigorchuk orbit points

_GRIG_GENS = [grig.from_letters(x) for x in grig.LETTERS]


def _schreier_ball(point, r):
    """Rooted labelled Schreier ball of the orbit of 0^inf, as a canonical tuple, and its points."""
    index = {point: 0}
    order = [point]
    rows = []
    depth = {point: 0}
    i = 0
    while i < len(order):
        x = order[i]
        row = []
        for g in _GRIG_GENS:
            y = grig.apply_zero_tail(g, x)
            if y not in index and depth[x] < r:
                index[y] = len(order)
                depth[y] = depth[x] + 1
                order.append(y)
            row.append(index.get(y))
        rows.append(tuple(row))
        i += 1
    return tuple(rows), depth


def grig_orbit_points(k, R, extra_length=8):
    """0^inf and k-1 points v 0^inf, |v| from 2 floor(log2 R) upward, far apart and locally alike.

    A point is accepted when its labelled Schreier ball of radius 2R matches
    that of 0^inf and it lies at distance > 2R from the points already chosen.
    """
    base_len = 2 * int(math.floor(math.log2(R))) if R >= 1 else 0
    model, near = _schreier_ball("", 2 * R)
    chosen = [""]
    balls = [near]
    if k == 1:
        return chosen
    for L in range(max(base_len, 1), max(base_len, 1) + extra_length + 1):
        for n in range(2 ** L):
            v = format(n, f"0{L}b")
            p = v.rstrip("0")
            if any(p in b for b in balls):
                continue
            shape, pts = _schreier_ball(p, 2 * R)
            if shape != model:
                continue
            chosen.append(p)
            balls.append(pts)
            if len(chosen) == k:
                return chosen
    raise WitnessError(f"no {k} suitable orbit points up to word length {base_len + extra_length}")


def grig_wreath(A, R):
    """A wr_X Grig with a_i at orbit points x_i, against (prod C_e_i) wr_X Grig."""
    orders = _lamp_orders(A)
    _require(all(o != 1 for o in orders), "lamp generators must be nontrivial")
    pts = grig_orbit_points(A.ngens(), max(R, 1))
    model = PermWreathGrig(A)
    elems = ([model.lamp_at(p, a) for p, a in zip(pts, A.gens())]
             + [model.head(g) for g in _GRIG_GENS])
    params = {"A": A.descriptor(), "orders": orders, "points": [p + "0^inf" for p in pts]}
    return Witness("grig_wreath", params, R, MarkedGroup(model, elements=elems),
                   _std(PermWreathGrig(FinAbelian(orders))), lambda r: grig_wreath(A, r))


def lamplighter_metab(n, R):
    """Z wr Z marked by (t, t^n a), against the free metabelian group FM2."""
    _require(n >= 1, "need n >= 1")
    model = Wreath(FinAbelian([0]), FinAbelian([0]))
    a, t = model.gens()
    elems = [t, model.mul(model.power(t, n), a)]
    cert = {0: Word((-1,) * n + (2,), 2)}
    return Witness("lamplighter_metab", {"n": n}, R,
                   MarkedGroup(model, elements=elems, certificate=cert),
                   _std(FreeMetabelian(2)), lambda r: lamplighter_metab(2 * r, r))


def bs_to_wreath(p, i, R):
    """BS(1,p) marked by (a, t^(i^2+1), t^i), against Z wr Z^2."""
    _require(p >= 2 and i >= 1, "need p >= 2 and i >= 1")
    model = BaumslagSolitar(p)
    a, t = model.gens()
    elems = [a, model.power(t, i * i + 1), model.power(t, i)]
    return Witness("bs_to_wreath", {"p": p, "i": i, "n": i * i + 1, "m": i}, R,
                   MarkedGroup(model, elements=elems),
                   _std(Wreath(FinAbelian([0]), FinAbelian([0, 0]))),
                   lambda r: bs_to_wreath(p, 2 * r, r))


def nil_relfree(k, N, R, C0=2):
    """N_{2,k} marked by a discriminating N-tuple, against N_{2,N}; R is a word length."""
    from .identities import discriminating_tuple
    d = discriminating_tuple(k, N, R, C0=C0)
    params = {"k": k, "N": N, "word_length": R, "C": d["C"],
              "rows": [list(r) for r in d["rows"]], "retried": d["tried"]}
    return Witness("nil_relfree", params, R // 2, MarkedGroup(NilC2(k), elements=d["tuple"]),
                   _std(NilC2(N)), lambda r: nil_relfree(k, N, 2 * r, C0))


def akhmedov_free(G, H, R):
    """G wr H marked by {w, w^h_1 g_1^h, ..., w^h_k g_k^h} + T, against F_(k+1) * H.

    The construction length is 2R (relations of length <= 2R are those of H);
    w takes the values y^j x y^-j of G = F_r on the ball of radius (k+1)2R of H.
    """
    _require(isinstance(G, Free) and G.rank >= 2, "the lamp group must be free of rank >= 2")
    k = G.ngens()
    L = 2 * R
    rB = (k + 1) * L
    cB = ball(_std(H), rB + 1)
    if len(cB) == sum(1 for n in cB.norms if n <= rB):
        raise WitnessError(f"{H.descriptor()} is finite")
    hw = Word(ball_words(cB)[cB.norms.index(rB + 1)], H.ngens())
    h = H.eval_word(hw)
    hiw = [_sphere_element(H, L * i)[1] for i in range(1, k + 1)]
    model = Wreath(G, H)
    x, y = G.gens()[:2]
    w = model.identity()
    for j, (pos, n) in enumerate(zip(cB.elements, cB.norms)):
        if n > rB:
            break
        val = G.conj(x, G.power(y, -j))
        w = model.mul(w, model.lamp_at(pos, val))
    heads = [model.head(g) for g in H.gens()]
    hh = model.head(h)
    gens = model.gens()
    elems = [w]
    for i in range(k):
        hi = model.head(H.eval_word(hiw[i]))
        elems.append(model.mul(model.conj(w, hi), model.conj(gens[i], hh)))
    elems += heads
    # certificate: g_i = h (w^h_i)^-1 u_i h^-1, spelled with the T letters k+2..
    shift = k + 1

    def tw(word):
        return Word(tuple(x + shift if x > 0 else x - shift for x in word.letters),
                    k + 1 + H.ngens())

    W = Word((1,), k + 1 + H.ngens())
    cert = {}
    for i in range(k):
        Hi = tw(hiw[i])
        conj_w = Hi.inverse() * W * Hi
        ui = Word((i + 2,), W.arity)
        cert[i] = tw(hw) * conj_w.inverse() * ui * tw(hw).inverse()
    src = MarkedGroup(model, elements=elems, certificate=cert)
    params = {"G": G.descriptor(), "H": H.descriptor(), "construction_length": L,
              "support_radius": rB, "h": hw.to_text(H.gen_names()),
              "h_i": [u.to_text(H.gen_names()) for u in hiw]}
    return Witness("akhmedov_free", params, R, src, _std(FreeProd(Free(k + 1), H)),
                   lambda r: akhmedov_free(G, H, r))


def hall_colouring(R, primes=(2, 3), target=(((1, 0), 3),)):
    """H_phi for a {primes}-universal phi, marked by (x^a y^c, x^b y^d, a), against H_psi."""
    from .hall import PrimeColouring, hall_witness, universal_colouring
    psi = PrimeColouring(dict(target))
    phi = universal_colouring(primes, [psi.restrict(R)])
    hw = hall_witness(phi, psi, R)
    params = {"primes": sorted(primes), "target": sorted([list(v), p] for v, p in target),
              "phi": phi.name, "matrix": [list(r) for r in hw.matrix]}
    return Witness("hall_colouring", params, R, hw.source, hw.target,
                   lambda r: hall_colouring(r, primes, target))


def abelian_witness(A, B, R):
    """A precedes B (AbelianNF) through one sheared epimorphism B -> A injective on torsion.

    The extra free generators of B go to t_j + M^j e_1 with M = 2R+1, which
    pushes every kernel element outside the ball of radius 2R.
    """
    if preceq_abelian(A, B) is not True:
        raise WitnessError(f"{A} does not precede {B}")
    src, tgt = FinAbelian(A.raw()), FinAbelian(B.raw())
    if A == B:
        return Witness("abelian", {"A": str(A), "B": str(B), "images": "identity"}, R,
                       _std(src), _std(tgt), lambda r: abelian_witness(A, B, r))
    images = [list(v) for v in kernel_shear(A, B)]
    M = 2 * R + 1
    for j, i in enumerate(range(A.rank, B.rank), start=1):
        images[i][0] += M ** j
    elems = [src.element(v) for v in images]
    return Witness("abelian", {"A": str(A), "B": str(B), "images": images}, R,
                   MarkedGroup(src, elements=elems), _std(tgt),
                   lambda r: abelian_witness(A, B, r))


def identity_witness(model):
    """G precedes itself through the constant standard marking."""
    return Witness("identity", {"G": model.descriptor()}, 0, _std(model), _std(model),
                   lambda r: _with_radius(identity_witness(model), r))


def _with_radius(w, r):
    w.radius = r
    return w


# ------------------------------------------------------------- registry

def _parse(text):
    from .parsing import parse_group
    return parse_group(text) if isinstance(text, str) else text


CASES = {
    "zm_in_zn": (lambda R, m=1, n=2: zm_in_zn(m, n, R)),
    "abelian_step": (lambda R, k=2, l=3: abelian_step(k, l, R)),
    "free_mn": (lambda R, m=2, n=3: free_mn(m, n, R)),
    "free_pad": (lambda R, G="Z/2", m=2: free_pad(_parse(G), m, R)),
    "wreath_split": (lambda R, A="Z/2", B="Z/3", C="Z": wreath_split(_parse(A), _parse(B), _parse(C), R)),
    "any_to_direct": (lambda R, A="F2", C="Z": any_to_direct(_parse(A), _parse(C), R)),
    "grig_wreath": (lambda R, A="F2": grig_wreath(_parse(A), R)),
    "lamplighter_metab": (lambda R, n=None: lamplighter_metab(2 * R if n is None else n, R)),
    "bs_to_wreath": (lambda R, p=2, i=None: bs_to_wreath(p, 2 * R if i is None else i, R)),
    "nil_relfree": (lambda R, k=2, N=3: nil_relfree(k, N, R)),
    "akhmedov_free": (lambda R, G="F2", H="Z": akhmedov_free(_parse(G), _parse(H), R)),
    "hall_colouring": (lambda R: hall_colouring(R)),
}


def witness(case, R, **params):
    """Build a registered case at design radius R (see CASES for parameter names)."""
    if case not in CASES:
        raise WitnessError(f"unknown case {case!r}; known: {', '.join(sorted(CASES))}")
    try:
        return CASES[case](R, **params)
    except TypeError as exc:
        raise WitnessError(f"bad parameters for {case}: {exc}") from None


# ---------------------------------------------------------- verification

def verify_witness(w, R=None, cap=DEFAULT_CAP, threads=1):
    """Literal comparison of the radius-R balls of source and target."""
    R = w.radius if R is None else R
    t0 = time.perf_counter()
    c1 = ball(w.source, R, cap, threads)
    c2 = ball(w.target, R, cap, threads)
    agree = balls_agree(c1, c2)
    return {"case": w.case, "params": w.params, "R": R, "agree": agree,
            "first_divergence": None if agree else first_divergence(c1, c2),
            "states_explored": len(c1) + len(c2),
            "millis": round(1000 * (time.perf_counter() - t0), 3)}


def transport_target_marking(w, words):
    """Rebuild both markings through words over the target marking.

    If the original agrees at radius R the new pair agrees at floor(R/k),
    k the longest word; the factory rebuilds the source at k times the radius.
    """
    words = list(words)
    if not words:
        raise WitnessError("empty marking")
    k = max(1, max(len(u) for u in words))
    try:
        tgt = MarkedGroup(w.target.model, elements=[w.target.evaluate(u) for u in words])
    except GenerationError as exc:
        raise WitnessError(f"new target marking: {exc}") from None

    def build(src_w, radius):
        src = MarkedGroup(src_w.source.model, elements=[src_w.source.evaluate(u) for u in words])
        return Witness(src_w.case + "+transport",
                       dict(src_w.params, transport=[u.to_text() for u in words]),
                       radius, src, tgt, lambda r: build(src_w.at(k * r), r))

    if all(u.letters == (i + 1,) for i, u in enumerate(words)) and len(words) == w.target.arity:
        return w
    return build(w, w.radius // k)


def compose_product_witness(w1, w2, kind):
    """Combine two witnesses by direct product, free product or wreath product."""
    r = min(w1.radius, w2.radius)

    def combine(a, b):
        if kind == "direct":
            m = Direct(a.model, b.model)
            return MarkedGroup(m, elements=[m.embed(0, g) for g in a.elements]
                               + [m.embed(1, g) for g in b.elements], check=False)
        if kind == "free":
            m = FreeProd(a.model, b.model)
            return MarkedGroup(m, elements=[m.embed(0, g) for g in a.elements]
                               + [m.embed(1, g) for g in b.elements], check=False)
        if kind == "wreath":
            m = Wreath(a.model, b.model)
            e = b.model.identity()
            return MarkedGroup(m, elements=[m.lamp_at(e, g) for g in a.elements]
                               + [m.head(g) for g in b.elements], check=False)
        raise WitnessError(f"unknown product kind {kind!r}")

    def build(x, y, radius):
        return Witness(f"{kind}({x.case},{y.case})", {"left": x.params, "right": y.params},
                       radius, combine(x.source, y.source), combine(x.target, y.target),
                       lambda s: build(x.at(s), y.at(s), s))

    return build(w1, w2, r)


def diagonal_witness(w_gh, w_hk, R):
    """G -> H -> K: spell the H-marking of w_hk in w_gh's target marking, evaluate on S_(kR)."""
    H = w_gh.target
    if w_hk.source.model != H.model:
        raise WitnessError("the middle groups differ")
    words = _words_in_ball(H, w_hk.source.elements, max_radius=64)
    k = max(1, max(len(u) for u in words))
    base = w_gh.at(k * R)
    src = MarkedGroup(base.source.model, elements=[base.source.evaluate(u) for u in words])
    return Witness(f"diagonal({w_gh.case},{w_hk.case})",
                   {"first": base.params, "second": w_hk.params, "stretch": k},
                   R, src, w_hk.target, None)


# ---------------------------------------------------------- quotient sanity

def known_relators(model, max_len):
    """Relators of length <= max_len from a presentation of selected targets, over its generators."""
    k = model.ngens()
    out = []
    gen = [Word.gen(i + 1, k) for i in range(k)]
    if isinstance(model, FinAbelian):
        out = [commutator(gen[i], gen[j]) for i in range(k) for j in range(i + 1, k)]
        out += [gen[i] ** f for i, f in enumerate(model.factors) if f]
    elif isinstance(model, NilC2) and model.n == 0:
        out = [commutator(commutator(gen[i], gen[j]), gen[l])
               for i in range(k) for j in range(i + 1, k) for l in range(k)]
    elif (isinstance(model, Wreath) and model.lamp == FinAbelian([0])
          and model.base == FinAbelian([0, 0])):
        a, x, y = gen
        out = [commutator(x, y)]
        span = max_len
        for i in range(-span, span + 1):
            for j in range(-span, span + 1):
                if (i, j) != (0, 0):
                    g = (x ** i) * (y ** j)
                    out.append(commutator(a, a.conj(g)))
    else:
        raise WitnessError(f"no relator list for {model.descriptor()}")
    return [u for u in out if 0 < len(u) <= max_len]


def quotient_sanity(w, R=None):
    """Every known target relator of length <= 2R is trivial on the source marking."""
    R = w.radius if R is None else R
    rels = known_relators(w.target.model, 2 * R)
    bad = [u.to_text() for u in rels if not w.source.model.is_identity(w.source.evaluate(u))]
    return {"checked": len(rels), "failed": bad}
