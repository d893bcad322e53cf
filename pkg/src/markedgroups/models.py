"""Concrete group models with exact arithmetic and canonical element forms.

Every element is an immutable, hashable value in canonical form, so that
group equality is plain ``==`` and ``serialize`` yields identical bytes for
equal elements.
"""

import json
from math import gcd

from . import grigorchuk as grig
from .words import Word


class ModelError(ValueError):
    pass


def _canon_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


class GroupModel:
    """Shared interface; subclasses implement the arithmetic."""

    kind = "abstract"

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def gens(self):
        raise NotImplementedError

    def gen_names(self):
        raise NotImplementedError

    def to_json(self, a):
        return a

    def validate(self, a):
        return True

    # ---- generic helpers

    def ngens(self):
        return len(self.gens())

    def is_identity(self, a):
        return a == self.identity()

    def serialize(self, a):
        return _canon_json(self.to_json(a))

    def power(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.identity()
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def product(self, elems):
        out = self.identity()
        for e in elems:
            out = self.mul(out, e)
        return out

    def commutator(self, a, b):
        return self.product([a, b, self.inv(a), self.inv(b)])

    def conj(self, a, g):
        """g^-1 a g."""
        return self.product([self.inv(g), a, g])

    def eval_word(self, word, images=None):
        """Evaluate a Word, letters indexing ``images`` (default: built-in generators)."""
        images = self.gens() if images is None else images
        invs = {}
        out = self.identity()
        for x in word.letters:
            i = abs(x) - 1
            if i >= len(images):
                raise ModelError(f"letter {x} exceeds {len(images)} available images")
            if x > 0:
                g = images[i]
            else:
                if i not in invs:
                    invs[i] = self.inv(images[i])
                g = invs[i]
            out = self.mul(out, g)
        return out

    def order(self, a, cap=1 << 12):
        """Order of a by stepping powers; 0 when it exceeds cap."""
        h = a
        for n in range(1, cap + 1):
            if self.is_identity(h):
                return n
            h = self.mul(h, a)
        return 0

    def generation_test(self, elems, words=None):
        """True/False when decided exactly, None when undecided."""
        return None

    def gen_order(self, i):
        return self.order(self.gens()[i])

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def __repr__(self):
        return f"<{self.descriptor()}>"


def _check_tuple(a, n, what):
    if not isinstance(a, tuple) or len(a) != n:
        raise ModelError(f"payload {a!r} is not a {what}")


# ------------------------------------------------------------ FinAbelian

class FinAbelian(GroupModel):
    """Direct sum of cyclic groups Z/n_i (n_i = 0 meaning Z)."""

    kind = "abelian"

    def __init__(self, factors):
        self.factors = tuple(int(f) for f in factors)
        if any(f < 0 or f == 1 for f in self.factors):
            # Z/1 is trivial; allowed but normalised away is the caller's job
            if any(f < 0 for f in self.factors):
                raise ModelError("negative invariant factor")

    def descriptor(self):
        if not self.factors:
            return "1"
        return " x ".join("Z" if f == 0 else f"Z/{f}" for f in self.factors)

    def _red(self, v):
        return tuple(x % f if f else x for x, f in zip(v, self.factors))

    def identity(self):
        return (0,) * len(self.factors)

    def mul(self, a, b):
        return self._red(tuple(x + y for x, y in zip(a, b)))

    def inv(self, a):
        return self._red(tuple(-x for x in a))

    def power(self, a, n):
        return self._red(tuple(n * x for x in a))

    def gens(self):
        n = len(self.factors)
        return [self._red(tuple(int(i == j) for j in range(n))) for i in range(n)]

    def gen_names(self):
        return [f"e{i + 1}" for i in range(len(self.factors))]

    def to_json(self, a):
        return list(a)

    def validate(self, a):
        _check_tuple(a, len(self.factors), "FinAbelian vector")
        if self._red(a) != a:
            raise ModelError("vector not reduced")

    def element(self, vec):
        return self._red(tuple(vec))

    def order(self, a, cap=None):
        n = 1
        for x, f in zip(a, self.factors):
            if x == 0:
                continue
            if f == 0:
                return 0
            k = f // gcd(f, x)
            n = n * k // gcd(n, k)
        return n

    def generation_test(self, elems, words=None):
        from .abelian import subgroup_index_is_one
        return subgroup_index_is_one(list(elems), self.factors)


# ------------------------------------------------------------------ Free

class Free(GroupModel):
    kind = "free"

    def __init__(self, rank):
        self.rank = int(rank)
        if self.rank < 1:
            raise ModelError("free rank must be positive")

    def descriptor(self):
        return f"F{self.rank}"

    def identity(self):
        return ()

    def mul(self, a, b):
        i = 0
        n = min(len(a), len(b))
        while i < n and a[-1 - i] == -b[i]:
            i += 1
        return a[:len(a) - i] + b[i:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def gens(self):
        return [(i,) for i in range(1, self.rank + 1)]

    def gen_names(self):
        if self.rank == 2:
            return ["x", "y"]
        if self.rank == 1:
            return ["x"]
        return [f"x{i}" for i in range(1, self.rank + 1)]

    def to_json(self, a):
        return list(a)

    def validate(self, a):
        if not isinstance(a, tuple):
            raise ModelError("free payload must be a tuple")
        if any(not isinstance(x, int) or x == 0 or abs(x) > self.rank for x in a):
            raise ModelError(f"free payload has letters outside rank {self.rank}")
        if Word(a, self.rank).letters != a:
            raise ModelError("free payload not reduced")

    def order(self, a, cap=None):
        return 1 if not a else 0

    def generation_test(self, elems, words=None):
        return stallings_generates(elems, self.rank)


def stallings_generates(elems, rank):
    """Stallings folding: does the subgroup generated by the words equal F_rank?"""
    parent = {}

    def find(v):
        while parent.get(v, v) != v:
            parent[v] = parent.get(parent[v], parent[v])
            v = parent[v]
        return v

    adj = {0: {}}
    nxt = [1]

    def new_vertex():
        v = nxt[0]
        nxt[0] += 1
        adj[v] = {}
        return v

    pending = []

    def add_edge(u, lab, v):
        pending.append((u, lab, v))

    for w in elems:
        if not w:
            continue
        cur = 0
        for i, x in enumerate(w):
            tgt = 0 if i == len(w) - 1 else new_vertex()
            add_edge(cur, x, tgt)
            cur = tgt

    def union(u, v):
        u, v = find(u), find(v)
        if u == v:
            return
        if v < u:
            u, v = v, u
        parent[v] = u
        for lab, t in list(adj[v].items()):
            pending.append((u, lab, t))
        adj[v] = {}

    while pending:
        u, lab, v = pending.pop()
        u, v = find(u), find(v)
        for a, l, b in ((u, lab, v), (v, -lab, u)):
            a = find(a)
            b = find(b)
            cur = adj[a].get(l)
            if cur is None:
                adj[a][l] = b
            else:
                cur = find(cur)
                adj[a][l] = cur
                if cur != b:
                    union(cur, b)
    verts = {find(v) for v in adj}
    if len(verts) != 1:
        return False
    labels = {abs(l) for l in adj[find(0)]}
    return labels == set(range(1, rank + 1))


# ------------------------------------------------------------------ NilC2

class NilC2(GroupModel):
    """Free nilpotent class-2 group on k generators, commutators reduced mod n (n=0: none).

    Element (x, c) stands for x_1^{x_1} ... x_k^{x_k} prod c_ij^{c_ij}, with
    c_ij = [x_i, x_j] = x_i x_j x_i^-1 x_j^-1 for i < j.
    """

    kind = "nilc2"

    def __init__(self, k, n=0):
        self.k = int(k)
        self.n = int(n)
        self.pairs = [(i, j) for i in range(self.k) for j in range(i + 1, self.k)]

    def descriptor(self):
        return f"N2_{self.k}" + (f"/{self.n}" if self.n else "")

    def _redc(self, c):
        if self.n:
            return tuple(v % self.n for v in c)
        return tuple(c)

    def identity(self):
        return ((0,) * self.k, (0,) * len(self.pairs))

    def mul(self, a, b):
        x, c = a
        y, d = b
        z = tuple(p + q for p, q in zip(x, y))
        e = [p + q for p, q in zip(c, d)]
        for t, (i, j) in enumerate(self.pairs):
            # moving y_i left past x_j (i < j) costs c_ij^(-x_j y_i)
            if x[j] and y[i]:
                e[t] -= x[j] * y[i]
        return (z, self._redc(e))

    def inv(self, a):
        x, c = a
        d = [-v for v in c]
        for t, (i, j) in enumerate(self.pairs):
            if x[i] and x[j]:
                d[t] -= x[i] * x[j]
        return (tuple(-v for v in x), self._redc(d))

    def gens(self):
        z = (0,) * len(self.pairs)
        return [(tuple(int(i == j) for j in range(self.k)), z) for i in range(self.k)]

    def gen_names(self):
        if self.k <= 3:
            return ["x", "y", "z"][: self.k]
        return [f"x{i}" for i in range(1, self.k + 1)]

    def element(self, x, c=None):
        c = c if c is not None else (0,) * len(self.pairs)
        return (tuple(x), self._redc(c))

    def central(self, a):
        return a[1]

    def is_central(self, a):
        return not any(a[0])

    def to_json(self, a):
        return {"x": list(a[0]), "c": list(a[1])}

    def validate(self, a):
        _check_tuple(a, 2, "Mal'cev pair")
        _check_tuple(a[0], self.k, "exponent vector")
        _check_tuple(a[1], len(self.pairs), "commutator vector")
        if self._redc(a[1]) != a[1]:
            raise ModelError("commutator part not reduced")

    def power(self, a, n):
        x, c = a
        # (x,c)^n = (n x, n c - C(n,2) sum_{i<j} x_i x_j)
        e = [n * v for v in c]
        tri = n * (n - 1) // 2
        for t, (i, j) in enumerate(self.pairs):
            e[t] -= tri * x[i] * x[j]
        return (tuple(n * v for v in x), self._redc(e))

    def order(self, a, cap=1 << 12):
        if any(a[0]):
            return 0
        return super().order(a, cap)

    def generation_test(self, elems, words=None):
        # nilpotent: generation is detected on the abelianisation Z^k
        from .abelian import subgroup_index_is_one
        return subgroup_index_is_one([e[0] for e in elems], (0,) * self.k)


# ---------------------------------------------------------------- Grigorchuk

class Grigorchuk(GroupModel):
    kind = "grigorchuk"

    def descriptor(self):
        return "Grig"

    def identity(self):
        return grig.IDENTITY

    def mul(self, a, b):
        return grig.mul(a, b)

    def inv(self, a):
        return grig.inv(a)

    def gens(self):
        return list(grig.LETTERS)

    def gen_names(self):
        return list(grig.LETTERS)

    def to_json(self, a):
        return grig.serialize(a)

    def validate(self, a):
        def ok(g):
            if isinstance(g, str):
                return g in grig.NUCLEUS
            return isinstance(g, tuple) and len(g) == 3 and g[0] in (0, 1) and ok(g[1]) and ok(g[2])
        if not ok(a):
            raise ModelError("not a Grigorchuk portrait")

    def order(self, a, cap=1 << 16):
        return grig.element_order(a, cap)

    def generation_test(self, elems, words=None):
        # needs the words: the abelianisation to (Z/2)^3 is read from letter counts
        if words is None:
            return None
        vecs = [grig.abelianization(word_to_letters(w, self.gen_names())) for w in words]
        return _span_f2(vecs) == 3


def word_to_letters(w, names):
    out = []
    for x in w.letters:
        out.append(names[abs(x) - 1])  # all generators are involutions
    return "".join(out)


def _span_f2(vecs):
    rows = [int("".join(map(str, v)), 2) for v in vecs]
    rank = 0
    basis = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            rank += 1
    return rank


# -------------------------------------------------------------- BS(1,p)

class BaumslagSolitar(GroupModel):
    """BS(1,p) = Z[1/p] x| Z; element (num, e, m) means q = num * p^e with head m.

    (q1,m1)(q2,m2) = (q1 + p^-m1 q2, m1 + m2).
    """

    kind = "bs"

    def __init__(self, p):
        self.p = int(p)
        if self.p < 2:
            raise ModelError("BS(1,p) needs p >= 2")

    def descriptor(self):
        return f"BS(1,{self.p})"

    def _norm(self, num, e):
        if num == 0:
            return 0, 0
        p = self.p
        while num % p == 0:
            num //= p
            e += 1
        return num, e

    def _add(self, n1, e1, n2, e2):
        if n1 == 0:
            return n2, e2
        if n2 == 0:
            return n1, e1
        e = min(e1, e2)
        num = n1 * self.p ** (e1 - e) + n2 * self.p ** (e2 - e)
        return self._norm(num, e)

    def identity(self):
        return (0, 0, 0)

    def mul(self, a, b):
        n1, e1, m1 = a
        n2, e2, m2 = b
        num, e = self._add(n1, e1, n2, e2 - m1 if n2 else 0)
        return (num, e, m1 + m2)

    def inv(self, a):
        n, e, m = a
        # (q,m)^-1 = (-p^m q, -m)
        if n == 0:
            return (0, 0, -m)
        return (-n, e + m, -m)

    def gens(self):
        return [(1, 0, 0), (0, 0, 1)]

    def gen_names(self):
        return ["a", "t"]

    def to_json(self, a):
        return list(a)

    def validate(self, a):
        _check_tuple(a, 3, "BS element")
        if a[0] == 0 and a[1] != 0 or a[0] and a[0] % self.p == 0:
            raise ModelError("BS element not normalised")

    def element(self, q_num, q_exp, m):
        n, e = self._norm(q_num, q_exp)
        return (n, e, m)

    def order(self, a, cap=None):
        return 1 if a == (0, 0, 0) else 0

    def generation_test(self, elems, words=None):
        ms = [e[2] for e in elems]
        g = 0
        for m in ms:
            g = gcd(g, m)
        if g != 1:
            return False
        # tau = element with head 1 from an integer combination of heads
        coeffs = _bezout(ms)
        tau = self.identity()
        for e, c in zip(elems, coeffs):
            tau = self.mul(tau, self.power(e, c))
        num_gcd = 0
        for e in elems:
            u = self.mul(e, self.power(tau, -e[2]))
            num_gcd = gcd(num_gcd, abs(u[0]))
        return num_gcd == 1


def _bezout(values):
    """Integers c with sum c_i v_i = gcd(values)."""
    coeffs = [0] * len(values)
    g = 0
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = v
            coeffs[i] = 1
            continue
        # extended Euclid on (g, v)
        a, b = g, v
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        coeffs = [c * x0 for c in coeffs]
        coeffs[i] = y0
        g = a
    if g < 0:
        coeffs = [-c for c in coeffs]
    return coeffs


# ------------------------------------------------------- free metabelian

def _poly_add(p, q, sign=1):
    d = dict(p)
    for m, c in q:
        v = d.get(m, 0) + sign * c
        if v:
            d[m] = v
        else:
            d.pop(m, None)
    return tuple(sorted(d.items()))


def _poly_shift(p, u):
    """Multiply a Laurent polynomial by the monomial t^u."""
    if not any(u):
        return p
    return tuple(sorted((tuple(a + b for a, b in zip(m, u)), c) for m, c in p))


class FreeMetabelian(GroupModel):
    """F_k / F_k'' via the Magnus embedding: (abelianised vector, Fox derivatives)."""

    kind = "metabelian"

    def __init__(self, k):
        self.k = int(k)

    def descriptor(self):
        return f"FM{self.k}"

    def identity(self):
        return ((0,) * self.k, ((),) * self.k)

    def mul(self, a, b):
        u, P = a
        v, Q = b
        return (tuple(x + y for x, y in zip(u, v)),
                tuple(_poly_add(p, _poly_shift(q, u)) for p, q in zip(P, Q)))

    def inv(self, a):
        u, P = a
        mu = tuple(-x for x in u)
        return (mu, tuple(_poly_add((), _poly_shift(p, mu), -1) for p in P))

    def gens(self):
        zero = (0,) * self.k
        out = []
        for i in range(self.k):
            e = tuple(int(i == j) for j in range(self.k))
            polys = tuple(((zero, 1),) if j == i else () for j in range(self.k))
            out.append((e, polys))
        return out

    def gen_names(self):
        if self.k <= 3:
            return ["x", "y", "z"][: self.k]
        return [f"x{i}" for i in range(1, self.k + 1)]

    def to_json(self, a):
        return {"ab": list(a[0]),
                "fox": [[[list(m), c] for m, c in p] for p in a[1]]}

    def order(self, a, cap=None):
        return 1 if self.is_identity(a) else 0

    def generation_test(self, elems, words=None):
        from .abelian import subgroup_index_is_one
        if not subgroup_index_is_one([e[0] for e in elems], (0,) * self.k):
            return False
        return None


def fox_derivatives(word, k):
    """Abelianisation vector and abelianised Fox derivatives of a word in F_k."""
    fm = FreeMetabelian(k)
    return fm.eval_word(word)


# ------------------------------------------------------------------ Hall

class Hall(GroupModel):
    """Central quotient H_phi of Hall's group over Z^2.

    Element (z, apart, cent): head x^z1 y^z2, then prod a_p^e_p in lex order of
    p, then central coordinates c_v for v in the positive cone.  Heads act by
    h_z^-1 a_p h_z = a_{p+z}; c_{p,q} = [a_p, a_q] = c_{q-p}.
    """

    kind = "hall"

    def __init__(self, colouring):
        self.colouring = colouring

    def descriptor(self):
        return f"Hall({self.colouring.name})"

    def _mod(self, v):
        return self.colouring.value(v)

    def identity(self):
        return ((0, 0), (), ())

    def _reduce_central(self, d):
        out = []
        for v in sorted(d):
            m = self._mod(v)
            if m == 1:
                continue
            c = d[v] % m
            if c:
                out.append((v, c))
        return tuple(out)

    def _nmul(self, A, C, B, D):
        """Product in the class-2 part: (A, C) (B, D)."""
        e = dict(A)
        cent = dict(C)
        for v, c in D:
            cent[v] = cent.get(v, 0) + c
        for q, fq in B:
            # move a_q^fq left past each a_p^ep with p > q
            for p, ep in A:
                if p > q:
                    v = (p[0] - q[0], p[1] - q[1])
                    cent[v] = cent.get(v, 0) - ep * fq
            nv = e.get(q, 0) + fq
            if nv:
                e[q] = nv
            else:
                e.pop(q, None)
        return tuple(sorted(e.items())), cent

    def mul(self, a, b):
        z1, A, C = a
        z2, B, D = b
        if any(z2):
            A = tuple(((p[0] + z2[0], p[1] + z2[1]), e) for p, e in A)
        e, cent = self._nmul(A, C, B, D)
        return ((z1[0] + z2[0], z1[1] + z2[1]), e, self._reduce_central(cent))

    def inv(self, a):
        z, A, C = a
        cent = {v: -c for v, c in C}
        for i, (p, ep) in enumerate(A):
            for q, eq in A[i + 1:]:
                v = (q[0] - p[0], q[1] - p[1])
                cent[v] = cent.get(v, 0) - ep * eq
        mz = (-z[0], -z[1])
        B = tuple(((p[0] + mz[0], p[1] + mz[1]), -ep) for p, ep in A)
        return (mz, B, self._reduce_central(cent))

    def gens(self):
        return [((1, 0), (), ()), ((0, 1), (), ()), ((0, 0), (((0, 0), 1),), ())]

    def gen_names(self):
        return ["x", "y", "a"]

    def head(self, z):
        return ((z[0], z[1]), (), ())

    def to_json(self, a):
        z, A, C = a
        return {"head": list(z), "a": [[list(p), e] for p, e in A],
                "c": [[list(v), c] for v, c in C]}

    def order(self, a, cap=1 << 12):
        if any(a[0]) or a[1]:
            return 0
        return super().order(a, cap)

    def generation_test(self, elems, words=None):
        heads = [e[0] for e in elems]
        from .abelian import subgroup_index_is_one
        ab = [(z[0], z[1], sum(e for _, e in A)) for z, A, _ in elems]
        if not subgroup_index_is_one(ab, (0, 0, 0)):
            return False
        pure = [z for z, A, C in elems if not A and not C]
        has_a = any(not any(z) and len(A) == 1 and A[0][1] == 1 and not C for z, A, C in elems)
        if has_a and subgroup_index_is_one(pure, (0, 0)):
            return True
        del heads
        return None


# ------------------------------------------------------------ combinators

def _merge_names(left, right):
    if set(left) & set(right):
        return [n + "_1" for n in left] + [n + "_2" for n in right]
    return list(left) + list(right)


class Direct(GroupModel):
    kind = "direct"

    def __init__(self, left, right):
        self.left, self.right = left, right

    def descriptor(self):
        return f"({self.left.descriptor()})x({self.right.descriptor()})"

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def power(self, a, n):
        return (self.left.power(a[0], n), self.right.power(a[1], n))

    def gens(self):
        return ([(g, self.right.identity()) for g in self.left.gens()]
                + [(self.left.identity(), g) for g in self.right.gens()])

    def gen_names(self):
        return _merge_names(self.left.gen_names(), self.right.gen_names())

    def embed(self, side, g):
        if side == 0:
            return (g, self.right.identity())
        return (self.left.identity(), g)

    def to_json(self, a):
        return [self.left.to_json(a[0]), self.right.to_json(a[1])]

    def validate(self, a):
        _check_tuple(a, 2, "pair")
        self.left.validate(a[0])
        self.right.validate(a[1])

    def order(self, a, cap=1 << 12):
        o1 = self.left.order(a[0], cap)
        o2 = self.right.order(a[1], cap)
        if o1 == 0 or o2 == 0:
            return 0
        return o1 * o2 // gcd(o1, o2)

    def generation_test(self, elems, words=None):
        if self.left.generation_test([e[0] for e in elems]) is False:
            return False
        if self.right.generation_test([e[1] for e in elems]) is False:
            return False
        if isinstance(self.left, FinAbelian) and isinstance(self.right, FinAbelian):
            full = FinAbelian(self.left.factors + self.right.factors)
            return full.generation_test([a + b for a, b in elems])
        return None


class FreeProd(GroupModel):
    """Free product; elements are alternating tuples of (side, nontrivial element)."""

    kind = "freeprod"

    def __init__(self, left, right):
        self.left, self.right = left, right
        self.sides = (left, right)

    def descriptor(self):
        return f"({self.left.descriptor()})*({self.right.descriptor()})"

    def identity(self):
        return ()

    def mul(self, a, b):
        out = list(a)
        for side, g in b:
            if out and out[-1][0] == side:
                h = self.sides[side].mul(out[-1][1], g)
                out.pop()
                if not self.sides[side].is_identity(h):
                    out.append((side, h))
            else:
                out.append((side, g))
        return tuple(out)

    def inv(self, a):
        return tuple((s, self.sides[s].inv(g)) for s, g in reversed(a))

    def embed(self, side, g):
        if self.sides[side].is_identity(g):
            return ()
        return ((side, g),)

    def gens(self):
        return ([self.embed(0, g) for g in self.left.gens()]
                + [self.embed(1, g) for g in self.right.gens()])

    def gen_names(self):
        return _merge_names(self.left.gen_names(), self.right.gen_names())

    def to_json(self, a):
        return [[s, self.sides[s].to_json(g)] for s, g in a]

    def order(self, a, cap=1 << 12):
        if not a:
            return 1
        if len(a) == 1:
            return self.sides[a[0][0]].order(a[0][1], cap)
        # cyclically reduce: a = u c u^-1; elements of length >= 2 after that have infinite order
        lo, hi = 0, len(a) - 1
        while hi - lo >= 2 and a[lo][0] == a[hi][0] and self.sides[a[lo][0]].is_identity(
                self.sides[a[lo][0]].mul(a[lo][1], a[hi][1])):
            lo += 1
            hi -= 1
        if lo == hi:
            return self.sides[a[lo][0]].order(a[lo][1], cap)
        if hi - lo >= 1 and a[lo][0] == a[hi][0]:
            core = self.sides[a[lo][0]].mul(a[hi][1], a[lo][1])
            if hi - lo == 1:
                return self.sides[a[lo][0]].order(core, cap)
        return 0


# ---------------------------------------------------------------- wreath

def _lamp_names(lamp):
    n = lamp.ngens()
    return ["a"] if n == 1 else [f"a{i}" for i in range(1, n + 1)]


def _base_names(base):
    n = base.ngens()
    if n == 1:
        return ["t"]
    if n == 2:
        return ["x", "y"]
    return [f"t{i}" for i in range(1, n + 1)]


def _covers(model, elems):
    """Sufficient test: the elements contain the generators or pass the model's exact test."""
    present = set(elems)
    if all(g in present or model.is_identity(g) for g in model.gens()):
        return True
    return bool(model.generation_test(elems))


class Wreath(GroupModel):
    """Restricted standard wreath product lamp wr base.

    Element (lamps, g): lamps is a tuple of (position, value) sorted by the
    serialisation of the position.  (f,g)(f',g') = (f * (g.f'), gg') with
    (g.f')(h) = f'(g^-1 h).
    """

    kind = "wreath"

    def __init__(self, lamp, base):
        self.lamp, self.base = lamp, base
        self._keycache = {}

    def descriptor(self):
        return f"({self.lamp.descriptor()})wr({self.base.descriptor()})"

    def _pkey(self, pos):
        k = self._keycache.get(pos)
        if k is None:
            k = self.base.serialize(pos)
            self._keycache[pos] = k
        return k

    def _canon(self, d):
        items = [(p, v) for p, v in d.items() if not self.lamp.is_identity(v)]
        items.sort(key=lambda pv: self._pkey(pv[0]))
        return tuple(items)

    def identity(self):
        return ((), self.base.identity())

    def mul(self, a, b):
        f, g = a
        f2, g2 = b
        if not f2:
            return (f, self.base.mul(g, g2))
        d = dict(f)
        L = self.lamp
        for p, v in f2:
            q = self.base.mul(g, p)
            cur = d.get(q)
            d[q] = v if cur is None else L.mul(cur, v)
        return (self._canon(d), self.base.mul(g, g2))

    def inv(self, a):
        f, g = a
        gi = self.base.inv(g)
        d = {self.base.mul(gi, p): self.lamp.inv(v) for p, v in f}
        return (self._canon(d), gi)

    def lamp_at(self, pos, value):
        if self.lamp.is_identity(value):
            return self.identity()
        return (((pos, value),), self.base.identity())

    def head(self, g):
        return ((), g)

    def gens(self):
        e = self.base.identity()
        return ([self.lamp_at(e, v) for v in self.lamp.gens()]
                + [self.head(g) for g in self.base.gens()])

    def gen_names(self):
        return _lamp_names(self.lamp) + _base_names(self.base)

    def to_json(self, a):
        f, g = a
        return {"lamps": [[self.base.to_json(p), self.lamp.to_json(v)] for p, v in f],
                "head": self.base.to_json(g)}

    def order(self, a, cap=1 << 12):
        if self.base.order(a[1], cap) == 0:
            return 0
        return super().order(a, cap)

    def generation_test(self, elems, words=None):
        if self.base.generation_test([e[1] for e in elems]) is False:
            return False
        heads = [g for f, g in elems if not f]
        lamps = [f[0][1] for f, g in elems if len(f) == 1 and self.base.is_identity(g)]
        if heads and lamps and _covers(self.base, heads) and _covers(self.lamp, lamps):
            return True
        return None


class PermWreathGrig(GroupModel):
    """lamp wr_X Grig, X the orbit of 0^inf written as binary strings without trailing zeros.

    (f, g)(f', g') = (x -> f(x) f'(x^g), g g').
    """

    kind = "permwreath"

    def __init__(self, lamp):
        self.lamp = lamp

    def descriptor(self):
        return f"({self.lamp.descriptor()})wrXGrig"

    def _canon(self, d):
        return tuple(sorted((p, v) for p, v in d.items() if not self.lamp.is_identity(v)))

    def identity(self):
        return ((), grig.IDENTITY)

    def mul(self, a, b):
        f, g = a
        f2, g2 = b
        if not f2:
            return (f, grig.mul(g, g2))
        d = dict(f)
        gi = grig.inv(g)
        L = self.lamp
        for y, v in f2:
            x = grig.apply_zero_tail(gi, y)
            cur = d.get(x)
            d[x] = v if cur is None else L.mul(cur, v)
        return (self._canon(d), grig.mul(g, g2))

    def inv(self, a):
        f, g = a
        # (f,g)^-1 = (x -> f(x^{g^-1})^-1, g^-1)
        d = {grig.apply_zero_tail(g, y): self.lamp.inv(v) for y, v in f}
        return (self._canon(d), grig.inv(g))

    def lamp_at(self, point, value):
        if self.lamp.is_identity(value):
            return self.identity()
        return (((point.rstrip("0"), value),), grig.IDENTITY)

    def head(self, g):
        return ((), g)

    def gens(self):
        return ([self.lamp_at("", v) for v in self.lamp.gens()]
                + [self.head(x) for x in grig.LETTERS])

    def gen_names(self):
        n = self.lamp.ngens()
        lamp = ["s"] if n == 1 else [f"s{i}" for i in range(1, n + 1)]
        return lamp + list(grig.LETTERS)

    def to_json(self, a):
        f, g = a
        return {"lamps": [[p, self.lamp.to_json(v)] for p, v in f], "head": grig.serialize(g)}

    def generation_test(self, elems, words=None):
        heads = [g for f, g in elems if not f]
        lamps = [f[0][1] for f, g in elems if len(f) == 1 and g == grig.IDENTITY]
        if set(grig.LETTERS) <= set(heads) and lamps and _covers(self.lamp, lamps):
            return True
        return None


def trivial_group():
    return FinAbelian(())


# ------------------------------------------------------- module-level API

def mul(model, a, b):
    """Checked product: both payloads are validated against the model."""
    model.validate(a)
    model.validate(b)
    return model.mul(a, b)


def inv(model, a):
    model.validate(a)
    return model.inv(a)


def is_identity(model, a):
    model.validate(a)
    return model.is_identity(a)


def grig_apply(g, point):
    """Right action of a Grigorchuk element on a finite binary word."""
    return grig.apply(g, point)
