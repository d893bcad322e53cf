"""Identities, almost-identities, universal sentences and discriminating tuples."""

from itertools import product
from math import gcd

from sympy import Matrix, ZZ, isprime, nextprime
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors

from . import grigorchuk as grig
from .balls import ball, ball_words, balls_agree
from .marked import MarkedGroup
from .models import Direct, Free, NilC2, stallings_generates
from .words import Word, commutator, cyclic_reduce, free_reduce, reduced_words


class SearchExhausted(RuntimeError):
    pass


# ------------------------------------------------------- free-group words

def primitive_root(w):
    """(root, e) with w = root^e and root not a proper power."""
    if not w.letters:
        raise ValueError("trivial word has no root")
    u, c = cyclic_reduce(w)
    n = len(c.letters)
    for p in range(1, n + 1):
        if n % p == 0 and c.letters == c.letters[:p] * (n // p):
            core = Word(c.letters[:p], w.arity)
            return u * core * u.inverse(), n // p
    raise AssertionError


def commute(u, v):
    return not commutator(u, v).letters


def merge_identities(ws):
    """A nontrivial word vanishing wherever one of the inputs vanishes."""
    ws = [w for w in ws]
    if not ws:
        raise ValueError("need at least one word")
    arity = max(w.arity for w in ws)
    v = ws[0].widen(arity)
    for w in ws[1:]:
        w = w.widen(arity)
        if not w.letters or not v.letters:
            raise ValueError("inputs must be nontrivial")
        if commute(v, w):
            r1, a = primitive_root(v)
            r2, b = primitive_root(w)
            if r1 != r2:
                # roots of commuting words agree up to inversion
                assert r2 == r1.inverse()
            v = r1 ** (a * b // gcd(a, b))
        else:
            v = commutator(v, w)
    return v


def wreath_almost_identity(v, w, max_len=6):
    """u = v(w^a, w^(a^2), ..., w^(a^m)) for the first a not commuting with w."""
    k = w.arity
    if k < 2:
        raise SearchExhausted("F_1 is abelian: no element generates a free group of rank 2 with w")
    if not v.letters or not w.letters:
        raise ValueError("v and w must be nontrivial")
    for L in range(1, max_len + 1):
        for letters in reduced_words(k, L):
            a = Word(letters, k)
            if commute(a, w):
                continue
            conj = [w.conj(a ** i) for i in range(1, v.arity + 1)]
            u = v.substitute(conj)
            if u.letters:
                return u, a
    raise SearchExhausted(f"no suitable a of length <= {max_len}")


# -------------------------------------------------------- tuple searches

def _ball_pool(mg, radius, cap):
    c = ball(mg, radius, cap)
    return c.elements, ball_words(c), c.norms


def falsify_identity(model, w, budget=3, cap=200_000, max_tuples=5_000_000):
    """Tuples from growing balls of the standard marking; returns the first with w != 1."""
    mg = MarkedGroup.standard(model)
    n = w.arity
    tried = 0
    for r in range(budget + 1):
        elems, words, norms = _ball_pool(mg, r, cap)
        for idx in product(range(len(elems)), repeat=n):
            if r and max(norms[i] for i in idx) < r:
                continue  # already checked at a smaller radius
            tried += 1
            if tried > max_tuples:
                raise SearchExhausted(f"more than {max_tuples} tuples")
            vals = [elems[i] for i in idx]
            if not model.is_identity(model.eval_word(w, vals)):
                return {"found": True, "tuple": vals, "words": [words[i] for i in idx],
                        "radius": r, "tried": tried}
    return {"found": False, "radius": budget, "tried": tried}


def _generates(model, elems, words):
    if isinstance(model, Free):
        return stallings_generates(elems, model.rank)
    return model.generation_test(elems, [Word(x, model.ngens()) for x in words])


def falsify_almost_identity(model, w, k, budget=3, cap=200_000, max_tuples=2_000_000):
    """A generating k-tuple on which w does not vanish."""
    mg = MarkedGroup.standard(model)
    if w.arity > k:
        raise ValueError("word uses more variables than the tuple size")
    tried = 0
    for r in range(budget + 1):
        elems, words, norms = _ball_pool(mg, r, cap)
        for idx in product(range(len(elems)), repeat=k):
            if r and max(norms[i] for i in idx) < r:
                continue
            tried += 1
            if tried > max_tuples:
                raise SearchExhausted(f"more than {max_tuples} tuples")
            vals = [elems[i] for i in idx]
            if model.is_identity(model.eval_word(w.widen(k), vals)):
                continue
            if _generates(model, vals, [words[i] for i in idx]) is True:
                return {"found": True, "tuple": vals, "words": [words[i] for i in idx],
                        "radius": r, "tried": tried}
    return {"found": False, "radius": budget, "tried": tried}


# ------------------------------------------------------------- sentences

def _kleene(f, known):
    """Three-valued evaluation; known(atom) is True/False/None."""
    tag = f[0]
    if tag == "atom":
        return known(f[1])
    if tag == "not":
        v = _kleene(f[1], known)
        return None if v is None else not v
    vals = [_kleene(g, known) for g in f[1:]]
    if tag == "and":
        if any(v is False for v in vals):
            return False
        return None if any(v is None for v in vals) else True
    if tag == "or":
        if any(v is True for v in vals):
            return True
        return None if any(v is None for v in vals) else False
    raise ValueError(tag)


def evaluate_sentence_on_ball(mg, sentence, rho=3, cap=200_000, max_nodes=20_000_000):
    """Search all tuples from the radius-rho ball for a falsifying assignment.

    Returns {"holds_on_ball": True} or a witness with elements and words.
    Subtrees are pruned as soon as the partial assignment decides the formula.
    """
    c = ball(mg, rho, cap)
    elems, words = c.elements, ball_words(c)
    model = mg.model
    n = sentence.nvars
    atoms = sentence.atoms()
    used = {a: sorted({abs(x) for x in a.letters}) for a in atoms}
    memo = {}
    assign = []
    nodes = [0]

    def known(atom):
        vs = used[atom]
        if any(v > len(assign) for v in vs):
            return None
        key = (atom, tuple(assign[v - 1] for v in vs))
        r = memo.get(key)
        if r is None:
            vals = [elems[assign[i]] if i < len(assign) else model.identity() for i in range(n)]
            r = model.is_identity(model.eval_word(atom, vals))
            memo[key] = r
        return r

    def search():
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise SearchExhausted(f"more than {max_nodes} partial assignments")
        v = _kleene(sentence.formula, known)
        if v is True:
            return None
        if v is False:
            return list(assign) + [0] * (n - len(assign))
        for i in range(len(elems)):
            assign.append(i)
            hit = search()
            assign.pop()
            if hit is not None:
                return hit
        return None

    hit = search()
    if hit is None:
        return {"holds_on_ball": True, "rho": rho, "ball_size": len(elems)}
    tup = [elems[i] for i in hit]
    return {"holds_on_ball": False, "rho": rho, "tuple": tup,
            "words": [Word(words[i], mg.arity) if words[i] else () for i in hit],
            "names": list(sentence.names)}


def sentence_holds_at(model, sentence, values):
    """Evaluate a sentence at one concrete tuple of elements."""
    return sentence.evaluate(lambda w: model.is_identity(model.eval_word(w, values)))


# --------------------------------------------------------- speed sequences

def speed_check(values, C):
    """x1 >= C and x_{i+1} >= x_i^C."""
    values = list(values)
    if not values or values[0] < C:
        return False
    return all(b >= a ** C for a, b in zip(values, values[1:]))


def _floor(prev, C):
    return 1 if prev is None else max(prev ** C, prev + 1)


def _det(rows):
    return int(Matrix(rows).det())


def rapid_matrix(d, e=None, C=2, prime_cap=10_000):
    """e vectors in Z^d whose entries, in construction order, grow at speed C.

    The leading k x k minors are primes; the extra rows are adjusted until the
    maximal minors have gcd 1, so the vectors generate Z^d.  Returns the rows
    and the construction order of entries as (row, column) pairs.
    """
    e = d + 1 if e is None else e
    if d < 1 or C < 1 or e < d:
        raise ValueError("need d >= 1, C >= 1, e >= d")
    X = [[0] * d for _ in range(e)]
    order = []
    prev = None

    def put(i, j, lo):
        nonlocal prev
        X[i][j] = lo
        order.append((i, j))
        prev = lo

    # x11: a prime at least C (or 1 when C = 1)
    first = 1 if C == 1 else (C if isprime(C) else nextprime(C))
    put(0, 0, first)
    p = first
    for k in range(1, d):
        pos = [(k, j) for j in range(k)] + [(i, k) for i in range(k)]
        for (i, j) in pos:
            put(i, j, _floor(prev, C))
        # det of the leading (k+1)-minor is p * x_kk + r; r must be prime to p
        X[k][k] = 0
        for _ in range(64):
            r = _det([row[:k + 1] for row in X[:k + 1]])
            if p == 1 or r % p:
                break
            if not _bump(X, pos, k, p):
                raise SearchExhausted("could not make the corner remainder coprime")
            _refloor(X, order, C)
        else:
            raise SearchExhausted("corner remainder stayed divisible")
        lo = _floor(X[order[-1][0]][order[-1][1]], C)
        x = lo
        for _ in range(prime_cap * max(1, p)):
            if isprime(p * x + r):
                break
            x += 1
        else:
            raise SearchExhausted("prime search cap reached")
        put(k, k, x)
        p = p * x + r
    # extra rows
    for i in range(d, e):
        for j in range(d):
            put(i, j, _floor(prev, C))
        last = (i, d - 1)
        for _ in range(prime_cap):
            if _minors_gcd(X[:i + 1], d) == 1:
                break
            X[last[0]][last[1]] += 1
        else:
            raise SearchExhausted("could not reach coprime maximal minors")
        prev = X[last[0]][last[1]]
    vals = [X[i][j] for i, j in order]
    if not speed_check(vals, C) and C > 1:
        raise AssertionError("construction violated the speed condition")
    return [tuple(row) for row in X], order


def _bump(X, pos, k, p):
    """Raise entries by small amounts (latest positions first) so the corner remainder leaves pZ."""
    base = [X[i][j] for i, j in pos]
    span = min(p, 3)
    combos = sorted((c for c in product(range(span), repeat=len(pos)) if any(c)),
                    key=lambda c: (sum(c), c[::-1]))
    for c in combos:
        for (i, j), b, dlt in zip(pos, base, c):
            X[i][j] = b + dlt
        if _det([row[:k + 1] for row in X[:k + 1]]) % p:
            return True
    for (i, j), b in zip(pos, base):
        X[i][j] = b
    return False


def _refloor(X, order, C):
    """After bumping an entry, lift later entries so the speed condition still holds."""
    prev = None
    for i, j in order:
        lo = _floor(prev, C) if prev is not None else X[i][j]
        if X[i][j] < lo:
            X[i][j] = lo
        prev = X[i][j]


def _minors_gcd(rows, d):
    from itertools import combinations
    g = 0
    for idx in combinations(range(len(rows)), d):
        g = gcd(g, _det([rows[i] for i in idx]))
        if g == 1:
            return 1
    return g


def vectors_generate(rows, d):
    facs = invariant_factors(Matrix([list(r) for r in rows]), domain=ZZ)
    return len(facs) >= d and all(abs(int(f)) == 1 for f in facs[:d])


# --------------------------------------------------- discriminating tuples

def discriminating_tuple(k, N, R, C0=2, C_cap=64, cap=2_000_000):
    """N elements of N_{2,k} (pure x-parts from a rapid matrix) whose ball matches N_{2,N}."""
    if N <= k:
        raise ValueError("need N > k")
    src = NilC2(k)
    tgt = MarkedGroup.standard(NilC2(N))
    radius = R // 2
    C = C0
    tried = []
    while C <= C_cap:
        rows, _ = rapid_matrix(k, N, C)
        elems = [src.element(r) for r in rows]
        mg = MarkedGroup(src, elements=elems)
        if radius == 0 or balls_agree(ball(mg, radius, cap), ball(tgt, radius, cap)):
            return {"tuple": elems, "rows": rows, "C": C, "radius": radius, "tried": tried}
        tried.append(C)
        C *= 2
    raise SearchExhausted(f"speed constant exceeded {C_cap}")


# --------------------------------------------------------- verbal subgroups

def _central_parts(model):
    """Flattened list of (NilC2 factor) for a NilC2 model or nested Direct of them."""
    if isinstance(model, NilC2):
        return [model]
    if isinstance(model, Direct):
        return _central_parts(model.left) + _central_parts(model.right)
    raise ValueError(f"verbal subgroups are supported for class-2 nilpotent models, not {model}")


def _central_vector(model, g):
    if isinstance(model, NilC2):
        if any(g[0]):
            return None
        return list(g[1])
    a = _central_vector(model.left, g[0])
    b = _central_vector(model.right, g[1])
    return None if a is None or b is None else a + b


def abelian_subgroup_type(vecs, mods):
    """Invariant factors (0 for Z) of the subgroup of sum Z/mods generated by vecs."""
    m = len(mods)
    lam = [[mods[i] if j == i else 0 for j in range(m)] for i in range(m) if mods[i]]
    rows = [list(v) for v in vecs if any(v)] + lam
    if not rows:
        return ()
    Hm = hermite_normal_form(Matrix(rows).T)
    B = Hm.T  # rows: a basis of the lattice L
    r = B.rows
    if not lam:
        return (0,) * r
    D = Matrix(lam)
    T = D * B.T * (B * B.T).inv()
    T = T.applyfunc(lambda x: int(x))
    facs = [abs(int(f)) for f in invariant_factors(T, domain=ZZ)]
    nonzero = [f for f in facs if f]
    free = r - len(nonzero)
    return tuple(f for f in nonzero if f > 1) + (0,) * free


def verbal_subgroup(model, words, bound=1, cap=200_000):
    """The subgroup generated by all values of the words on tuples from the radius-bound ball."""
    parts = _central_parts(model)
    mods = [f.n for f in parts for _ in f.pairs]

    def compute(r):
        mg = MarkedGroup.standard(model)
        elems = ball(mg, r, cap).elements
        vecs = set()
        for w in words:
            for tup in product(elems, repeat=w.arity):
                g = model.eval_word(w, list(tup))
                v = _central_vector(model, g)
                if v is None:
                    raise ValueError("verbal content is not central")
                vecs.add(tuple(v))
        return abelian_subgroup_type(sorted(vecs), mods)

    t1 = compute(bound)
    t2 = compute(bound + 1)
    finite = 0 not in t1
    order = None
    if finite:
        order = 1
        for f in t1:
            order *= f
    return {"factors": t1, "finite": finite, "order": order, "stable": t1 == t2}


# ----------------------------------------------------- distinctive tuples

def _grig_inv_word(w):
    return w[::-1]


def _grig_words(max_len):
    """Reduced words over a,b,c,d (a alternating with b,c,d), length-lex."""
    out = [""]
    layer = [""]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in "abcd":
                if w and (w[-1] == x or (w[-1] != "a" and x != "a")):
                    continue
                nxt.append(w + x)
        out += nxt
        layer = nxt
    return out


def _commutator_candidates(max_len):
    words = _grig_words(max_len)
    seen = set()
    yield "", grig.IDENTITY
    for u in words[1:]:
        for v in words[1:]:
            cw = u + v + _grig_inv_word(u) + _grig_inv_word(v)
            g = grig.from_letters(cw)
            if g in seen or g == grig.IDENTITY:
                continue
            seen.add(g)
            yield cw, g


def distinctive_tuple(w, k=3, base=("a", "b", "c"), max_len=4):
    """Abert's repair: make the orbit points p_0 w_1..n pairwise distinct.

    Returns the tuple as words over a,b,c,d.  The repair elements are
    commutators fixing the points already used by the same generator, found
    by length-lex search; the abelianisation (hence generation) is unchanged.
    """
    if not w.letters:
        raise ValueError("w must be nontrivial")
    if w.arity > k:
        raise ValueError("word has more variables than the tuple")
    tup = list(base) + ["a"] * (k - len(base))
    tup = tup[:k]
    elems = [grig.from_letters(t) for t in tup]
    cands = list(_commutator_candidates(max_len))
    v = w.letters
    pts = [""]
    for n in range(1, len(v) + 1):
        x = v[n - 1]
        j = abs(x) - 1
        Y = {pts[i] for i in range(0, n - 1) if v[i] == x}
        Y |= {pts[i] for i in range(1, n) if v[i - 1] == -x}
        prev = pts[-1]
        used = set(pts)
        for cw, c in cands:
            if any(grig.apply_zero_tail(c, y) != y for y in Y):
                continue
            if x > 0:
                h = grig.mul(c, elems[j])
                new = grig.apply_zero_tail(h, prev)
            else:
                h = grig.mul(elems[j], c)
                new = grig.apply_zero_tail(grig.inv(h), prev)
            if new not in used:
                elems[j] = h
                tup[j] = (cw + tup[j]) if x > 0 else (tup[j] + cw)
                pts.append(new)
                break
        else:
            raise SearchExhausted(f"no repair element found at letter {n}")
    return {"tuple": tup, "elements": elems, "points": pts}


def check_distinctive(w, tup_words):
    """Independent re-check: abelianisation spans (Z/2)^3 and w(tuple) != 1 by word contraction."""
    vecs = [grig.abelianization(t) for t in tup_words]
    from .models import _span_f2
    spans = _span_f2(vecs) == 3
    letters = []
    for x in w.letters:
        t = tup_words[abs(x) - 1]
        letters.append(t if x > 0 else t[::-1])
    nontrivial = not grig.word_is_identity("".join(letters))
    return spans and nontrivial


def girth_triple(min_girth=6, max_len=5, budget=200_000):
    """A generating triple of Grigorchuk elements with no relation shorter than min_girth."""
    from .balls import girth
    from .models import Grigorchuk, _span_f2
    G = Grigorchuk()
    words = [w for w in _grig_words(max_len) if w]
    words = [w for w in words if G.order(grig.from_letters(w)) == 0
             or G.order(grig.from_letters(w)) >= min_girth]
    tried = 0
    R = (min_girth + 1) // 2
    for t in product(words, repeat=3):
        if len(set(t)) < 3:
            continue
        if _span_f2([grig.abelianization(x) for x in t]) != 3:
            continue
        tried += 1
        if tried > budget:
            break
        mg = MarkedGroup(G, elements=[grig.from_letters(x) for x in t], check=False)
        g = girth(mg, R, cap=1_000_000)
        if g.value is None or g.value >= min_girth:
            return {"tuple": list(t), "girth": g, "tried": tried}
    raise SearchExhausted(f"no triple of girth >= {min_girth} among {tried} candidates")
