"""Finitely generated abelian groups and the convergence preorder between infinite ones.

A = Z^r + T_A is a limit of markings of B = Z^s + T_B exactly when some
epimorphism B -> A is injective on T_B.  Writing U for the image of T_B this
becomes a statement about each primary component separately:

    r <= s, and for every p there is U_p <= T_A,p with U_p of the type of
    T_B,p and rank(T_A,p / U_p) <= s - r.

The subgroup condition is checked by exhaustive enumeration of subgroups of
the (small) p-components, so verdicts are exact up to a size cap.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd

from sympy import Matrix, ZZ, factorint
from sympy.matrices.normalforms import invariant_factors


@dataclass(frozen=True, order=True)
class AbelianNF:
    """Z^rank + Z/d_1 + ... + Z/d_t with d_1 | d_2 | ... and every d_i >= 2."""

    rank: int
    factors: tuple = ()

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"factors {self.factors} are not a divisibility chain")
        if any(d < 2 for d in self.factors):
            raise ValueError("invariant factors must be at least 2")

    @property
    def infinite(self):
        return self.rank >= 1

    @property
    def torsion_order(self):
        n = 1
        for d in self.factors:
            n *= d
        return n

    def ncyclic(self):
        return self.rank + len(self.factors)

    def raw(self):
        return [0] * self.rank + list(self.factors)

    def primary(self):
        """{p: partition as a descending tuple of exponents}."""
        out = {}
        for d in self.factors:
            for p, e in factorint(d).items():
                out.setdefault(p, []).append(e)
        return {p: tuple(sorted(es, reverse=True)) for p, es in sorted(out.items())}

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.factors]
        return " x ".join(parts) if parts else "1"


def abelian_nf(raw):
    """Invariant-factor form of the direct sum of Z/n over the raw list (0 meaning Z)."""
    raw = [abs(int(n)) for n in raw]
    rank = sum(1 for n in raw if n == 0)
    tors = [n for n in raw if n > 1]
    if not tors:
        return AbelianNF(rank, ())
    m = Matrix.diag(*tors)
    facs = [int(f) for f in invariant_factors(m, domain=ZZ)]
    return AbelianNF(rank, tuple(f for f in facs if f > 1))


def from_primary(rank, parts):
    """Rebuild invariant factors from {p: partition}."""
    raw = [p ** e for p, lam in parts.items() for e in lam]
    return abelian_nf([0] * rank + raw)


def direct_sum(a, b):
    return abelian_nf(a.raw() + b.raw())


def subgroup_index_is_one(vecs, factors):
    """Do the vectors generate Z/n_1 + ... (n_i = 0 meaning Z)?"""
    n = len(factors)
    if n == 0:
        return True
    rows = [list(v) for v in vecs]
    for i, f in enumerate(factors):
        if f:
            rows.append([f if j == i else 0 for j in range(n)])
    if len(rows) < n:
        return False
    facs = invariant_factors(Matrix(rows), domain=ZZ)
    return len(facs) == n and all(abs(int(f)) == 1 for f in facs)


# ------------------------------------------------------------ p-groups

def _partition_contains(small, big):
    if len(small) > len(big):
        return False
    return all(a <= b for a, b in zip(small, big))


def torsion_embeds(a, b):
    """Does torsion(a) embed in torsion(b)?  Per prime: partition containment."""
    pa, pb = a.primary(), b.primary()
    return all(_partition_contains(lam, pb.get(p, ())) for p, lam in pa.items())


SUBGROUP_CAP = 1 << 10


def _pgroup_elements(p, lam):
    mods = [p ** e for e in lam]
    return mods, list(product(*[range(m) for m in mods]))


def _span(mods, gens):
    seen = {tuple(0 for _ in mods)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, g, mods))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _type_of_set(p, mods, elems):
    """Type of a finite abelian p-group given as a set of elements, via counts of p^i-torsion."""
    def order_exp(x):
        e = 0
        while any(v % m for v, m in zip(x, mods)):
            x = tuple(p * v % m for v, m in zip(x, mods))
            e += 1
        return e
    exps = [order_exp(x) for x in elems]
    # |H[p^i]| = p^(sum_j min(i, lam_j)); recover lam from successive differences
    counts = []
    i = 0
    total = len(elems)
    while True:
        c = sum(1 for e in exps if e <= i)
        counts.append(c)
        if c == total:
            break
        i += 1
    logs = [_ilog(c, p) for c in counts]
    # number of parts >= i is logs[i] - logs[i-1]
    parts_ge = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
    lam = []
    for i, k in enumerate(parts_ge, start=1):
        nxt = parts_ge[i] if i < len(parts_ge) else 0
        lam += [i] * (k - nxt)
    return tuple(sorted(lam, reverse=True))


def _ilog(n, p):
    e = 0
    while n > 1:
        n //= p
        e += 1
    return e


@lru_cache(maxsize=None)
def subgroup_profiles(p, lam):
    """All pairs (type of U, rank of G/U) for subgroups U of the p-group of type lam."""
    mods, elems = _pgroup_elements(p, lam)
    if len(elems) > SUBGROUP_CAP:
        return None
    zero = tuple(0 for _ in mods)
    subgroups = {frozenset([zero])}
    frontier = list(subgroups)
    while frontier:
        nxt = []
        for h in frontier:
            for x in elems:
                if x in h:
                    continue
                k = _span(mods, list(_gens_of(h, mods)) + [x])
                if k not in subgroups:
                    subgroups.add(k)
                    nxt.append(k)
        frontier = nxt
    out = set()
    for h in subgroups:
        u = _type_of_set(p, mods, h)
        # rank(G/U) = dim_Fp G / (U + pG)
        upg = _span(mods, list(_gens_of(h, mods)) + list(_basis_p(mods, p)))
        quot = len(elems) // len(upg)
        out.add((u, _ilog(quot, p)))
    return frozenset(out)


def _basis_p(mods, p):
    n = len(mods)
    for i in range(n):
        yield tuple(p % mods[j] if j == i else 0 for j in range(n))


def _gens_of(h, mods):
    """A small generating set of a subgroup given as a set (greedy)."""
    gens = []
    span = {tuple(0 for _ in mods)}
    for x in sorted(h, key=lambda v: (-_order(v, mods), v)):
        if x not in span:
            gens.append(x)
            span = _span(mods, gens)
            if len(span) == len(h):
                break
    return gens


def _order(x, mods):
    o = 1
    for v, m in zip(x, mods):
        o = o * (m // gcd(m, v)) // gcd(o, m // gcd(m, v))
    return o


def _quotients_of(lam):
    """All partitions contained in lam (types of quotients or subgroups)."""
    if not lam:
        return {()}
    out = set()

    def rec(i, prev, acc):
        if i == len(lam):
            out.add(tuple(x for x in acc if x))
            return
        for v in range(min(prev, lam[i]), -1, -1):
            rec(i + 1, v, acc + [v])

    rec(0, lam[0], [])
    return out


def _image_condition(a, b, injective):
    """Shared test for is_quotient (injective=False) and preceq (injective=True).

    Returns True/False, or None if some p-component is too large to enumerate.
    """
    r, s = a.rank, b.rank
    if r > s:
        return False
    slack = s - r
    pa, pb = a.primary(), b.primary()
    for p in sorted(set(pa) | set(pb)):
        lam = pa.get(p, ())
        mu = pb.get(p, ())
        if injective and not _partition_contains(mu, lam):
            return False
        allowed = {mu} if injective else _quotients_of(mu)
        if not lam:
            if injective and mu:
                return False
            continue
        prof = subgroup_profiles(p, lam)
        if prof is None:
            return None
        if not any(u in allowed and rk <= slack for u, rk in prof):
            return False
    return True


def is_quotient(a, b):
    """Is there an epimorphism b -> a?"""
    res = _image_condition(a, b, injective=False)
    if res is None:
        raise ValueError("torsion too large for exhaustive subgroup enumeration")
    return res


def preceq_abelian(a, b, explain=False):
    """a precedes b: some epimorphism b -> a is injective on torsion(b).

    Returns True, False, or "unknown"; with explain=True a (verdict, method) pair.
    """
    if not (a.infinite and b.infinite):
        raise ValueError("preceq_abelian compares infinite groups only")
    if a.rank > b.rank:
        verdict, method = False, "rank"
    elif not torsion_embeds(b, a):
        verdict, method = False, "torsion-embedding"
    else:
        res = _image_condition(a, b, injective=True)
        if res is None:
            verdict, method = "unknown", "cap"
        else:
            verdict, method = res, "subgroup-search"
    return (verdict, method) if explain else verdict


def upper_bound(a, b):
    """Both a and b precede Z^max(number of cyclic factors)."""
    return AbelianNF(max(a.ncyclic(), b.ncyclic()), ())


def poset_from_subsets(primes, subsets):
    """A_U = sum_{i in U} Z/p_i + Z^(1 + N - |U|), indices 1-based."""
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    n = len(primes)
    out = {}
    for u in subsets:
        u = frozenset(u)
        raw = [primes[i - 1] for i in sorted(u)] + [0] * (1 + n - len(u))
        out[u] = abelian_nf(raw)
    return out


def sigma_action(sigma, a):
    """Replace each primary component Z/p^v by Z/sigma(p)^v."""
    parts = a.primary()
    new = {}
    for p, lam in parts.items():
        if p not in sigma:
            raise ValueError(f"prime {p} outside the permutation's domain")
        new[sigma[p]] = lam
    return from_primary(a.rank, new)


def transposition(p, q):
    return {p: q, q: p}


def catalog(max_rank=2, max_order=12):
    """Infinite groups of rank 1..max_rank with torsion of order <= max_order."""
    tors = set()
    for n in range(1, max_order + 1):
        for t in _abelian_types_of_order(n):
            tors.add(t)
    out = [AbelianNF(r, t) for r in range(1, max_rank + 1) for t in sorted(tors)]
    return sorted(out, key=lambda g: (g.rank, g.torsion_order, g.factors))


def _abelian_types_of_order(n):
    fac = factorint(n)
    per_prime = []
    for p, e in sorted(fac.items()):
        per_prime.append([(p, lam) for lam in _partitions(e)])
    for choice in product(*per_prime):
        yield from_primary(0, dict(choice)).factors


def _partitions(n, maxpart=None):
    maxpart = n if maxpart is None else maxpart
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def parse_abelian(text):
    """Parse a descriptor like 'Z^2 x Z/6' into its invariant-factor form."""
    from .parsing import parse_group
    from .models import FinAbelian
    g = parse_group(text)
    if not isinstance(g, FinAbelian):
        raise ValueError(f"{text!r} is not a finitely generated abelian group")
    return abelian_nf(g.factors)


# ----------------------------------------------------------- derivations

def kernel_shear(a, b):
    """An epimorphism b -> a injective on torsion, as a matrix on cyclic generators.

    Returns (images, U-data) where images[i] is the image in a's cyclic coordinates
    of the i-th cyclic generator of b (free ones first, then the torsion factors of b).
    Raises if a does not precede b.
    """
    if preceq_abelian(a, b) is not True:
        raise ValueError(f"{a} does not precede {b}")
    return _find_epimorphism(a, b)


def _find_epimorphism(a, b):
    """Search images of b's generators in a (coordinates over a.raw()) forming an epimorphism."""
    amods = [0] * a.rank + list(a.factors)
    tors_elems = list(product(*[range(d) for d in a.factors]))
    # torsion images of b's torsion generators
    bt = list(b.factors)

    def order(v):
        o = 1
        for x, m in zip(v, a.factors):
            k = m // gcd(m, x)
            o = o * k // gcd(o, k)
        return o

    cands = [[t for t in tors_elems if bt_i % order(t) == 0] for bt_i in bt]
    slack = b.rank - a.rank
    for timgs in product(*cands):
        if not _injective_on(timgs, a.factors, bt):
            continue
        for extra in product(tors_elems, repeat=slack):
            images = []
            for i in range(a.rank):
                images.append(tuple(int(i == j) for j in range(a.rank)) + (0,) * len(a.factors))
            for t in extra:
                images.append((0,) * a.rank + tuple(t))
            for t in timgs:
                images.append((0,) * a.rank + tuple(t))
            if subgroup_index_is_one(images, amods):
                return images
    raise RuntimeError("no epimorphism found")


def _injective_on(timgs, mods, orders):
    """Is the map from prod Z/orders sending generators to timgs injective?"""
    n = 1
    for o in orders:
        n *= o
    if n == 1:
        return True
    seen = set()
    for coeffs in product(*[range(o) for o in orders]):
        img = tuple(sum(c * t[j] for c, t in zip(coeffs, timgs)) % m for j, m in enumerate(mods))
        if img in seen:
            return False
        seen.add(img)
    return True
