"""Canonical marked Cayley balls by breadth-first search.

States are numbered in discovery order with the fixed label order
g1..gk, g1^-1..gk^-1, so two marked balls are isomorphic (respecting the
marking) exactly when their certificates are byte-identical.
"""

import json
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .words import Word, canonical_cyclic, length_lex_key

DEFAULT_CAP = 5_000_000


class BallOverflow(RuntimeError):
    pass


@dataclass
class BallCertificate:
    radius: int
    arity: int
    norms: list
    nexts: list
    elements: list = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.norms)

    def to_json(self):
        return {"radius": self.radius, "arity": self.arity,
                "states": [{"norm": n, "next": list(nx)} for n, nx in zip(self.norms, self.nexts)]}

    def to_bytes(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")).encode()

    @classmethod
    def from_json(cls, data):
        return cls(data["radius"], data["arity"], [s["norm"] for s in data["states"]],
                   [tuple(s["next"]) for s in data["states"]])

    def truncate(self, r):
        """The certificate of the radius-r ball (a prefix, by BFS order)."""
        if r > self.radius:
            raise ValueError("cannot extend a certificate")
        n = sum(1 for x in self.norms if x <= r)
        nexts = [tuple(j if j is not None and j < n else None for j in nx) for nx in self.nexts[:n]]
        elems = self.elements[:n] if self.elements is not None else None
        return BallCertificate(r, self.arity, self.norms[:n], nexts, elems)

    def counts(self):
        out = [0] * (self.radius + 1)
        for n in self.norms:
            out[n] += 1
        for r in range(1, len(out)):
            out[r] += out[r - 1]
        return out

    def __eq__(self, other):
        return (self.radius, self.arity, self.norms, self.nexts) == \
               (other.radius, other.arity, other.norms, other.nexts)


def _labels(mg):
    m = mg.model
    return list(mg.elements) + [m.inv(e) for e in mg.elements]


def ball(mg, R, cap=DEFAULT_CAP, threads=1):
    """Exact radius-R ball of the marked Cayley graph."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    m = mg.model
    labels = _labels(mg)
    k2 = len(labels)
    index = {m.identity(): 0}
    elements = [m.identity()]
    norms = [0]
    nexts = []
    workers = (os.cpu_count() or 1) if threads is None else max(1, int(threads))
    pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def expand(g):
        return [m.mul(g, s) for s in labels]

    try:
        start = 0
        for layer in range(R + 1):
            stop = len(elements)
            frontier = elements[start:stop]
            if pool is not None and len(frontier) > 64:
                chunk = max(16, len(frontier) // (4 * workers))
                prods = list(pool.map(expand, frontier, chunksize=chunk))
            else:
                prods = [expand(g) for g in frontier]
            # sequential commit keeps the numbering independent of scheduling
            for row in prods:
                nx = []
                for h in row:
                    j = index.get(h)
                    if j is None and layer < R:
                        j = len(elements)
                        index[h] = j
                        elements.append(h)
                        norms.append(layer + 1)
                        if len(elements) > cap:
                            raise BallOverflow(f"ball exceeds {cap} states at radius {layer + 1}")
                    nx.append(j)
                nexts.append(tuple(nx))
            start = stop
    finally:
        if pool is not None:
            pool.shutdown()
    assert len(nexts) == len(elements) and k2 == 2 * mg.arity
    return BallCertificate(R, mg.arity, norms, nexts, elements)


def balls_agree(c1, c2):
    if c1.radius != c2.radius or c1.arity != c2.arity:
        raise ValueError(f"cannot compare radius {c1.radius}/arity {c1.arity} "
                         f"with radius {c2.radius}/arity {c2.arity}")
    return c1.to_bytes() == c2.to_bytes()


def first_divergence(c1, c2):
    """Least r at which the truncated certificates differ, or None."""
    R = min(c1.radius, c2.radius)
    for r in range(R + 1):
        if not balls_agree(c1.truncate(r), c2.truncate(r)):
            return r
    return None


def free_certificate(k, R):
    """Certificate of the free group of rank k (built from the model, not by formula)."""
    from .marked import MarkedGroup
    from .models import Free
    return ball(MarkedGroup.standard(Free(k)), R)


# ---------------------------------------------------------------- girth

@dataclass(frozen=True)
class Girth:
    value: int = None
    bound: int = None

    @property
    def exceeds(self):
        return self.value is None

    def __str__(self):
        return f"> {self.bound}" if self.value is None else str(self.value)


def girth(mg, Rmax, cap=DEFAULT_CAP, cert=None):
    """Shortest nontrivial reduced word in the marking that is trivial, if at most 2*Rmax."""
    if Rmax < 1:
        raise ValueError("Rmax must be at least 1")
    c = cert if cert is not None else ball(mg, Rmax, cap)
    k = c.arity
    limit = 2 * Rmax
    # BFS on (vertex, last label); label j's inverse is j +- k
    start = (0, -1)
    dist = {start: 0}
    q = deque([start])
    while q:
        v, last = q.popleft()
        d = dist[(v, last)]
        if d >= limit:
            continue
        for j, w in enumerate(c.nexts[v]):
            if w is None:
                continue
            if last >= 0 and j == (last + k) % (2 * k):
                continue
            if w == 0:
                return Girth(d + 1, limit)
            st = (w, j)
            if st not in dist:
                dist[st] = d + 1
                q.append(st)
    return Girth(None, limit)


# ------------------------------------------------------------ relations

def relations_up_to(mg, L, cap=DEFAULT_CAP):
    """Cyclically reduced relators of length <= L, one per class under rotation and inversion."""
    if L < 1:
        raise ValueError("L must be at least 1")
    c = ball(mg, (L + 1) // 2, cap)
    k = c.arity
    found = set()
    word = []

    def label_letter(j):
        return j + 1 if j < k else -(j - k + 1)

    def dfs(v, last):
        depth = len(word)
        if depth and v == 0:
            letters = tuple(word)
            if letters[0] != -letters[-1] or len(letters) == 1:
                w = Word(letters, k)
                if canonical_cyclic(w) == w.letters:
                    found.add(letters)
        if depth == L:
            return
        for j, w in enumerate(c.nexts[v]):
            if w is None:
                continue
            x = label_letter(j)
            if last is not None and x == -last:
                continue
            # the remaining letters must be able to return to the identity
            if c.norms[w] > L - depth - 1:
                continue
            word.append(x)
            dfs(w, x)
            word.pop()

    dfs(0, None)
    return sorted((Word(t, k) for t in found), key=length_lex_key)


# --------------------------------------------------------------- growth

@dataclass
class GrowthTable:
    counts: list

    @property
    def radius(self):
        return len(self.counts) - 1

    @property
    def rate_upper(self):
        R = self.radius
        if R == 0:
            return None
        return self.counts[R] ** (1.0 / R)

    def rate_text(self):
        r = self.rate_upper
        return "nan" if r is None else f"{r:.12f}"

    def to_csv(self):
        return "r,nu\n" + "".join(f"{r},{n}\n" for r, n in enumerate(self.counts))

    def submultiplicative(self):
        n = self.counts
        return all(n[a + b] <= n[a] * n[b]
                   for a in range(len(n)) for b in range(len(n) - a))


def growth(mg, R, cap=DEFAULT_CAP, threads=1):
    return GrowthTable(ball(mg, R, cap, threads).counts())


def rate_upper_transfer(src, tgt, R, cap=DEFAULT_CAP):
    """Ball agreement at R together with the two counts nu(R)."""
    c1, c2 = ball(src, R, cap), ball(tgt, R, cap)
    return {"agree": balls_agree(c1, c2), "nu_src": len(c1), "nu_tgt": len(c2)}


def ball_words(cert):
    """Shortlex-least word (tuple of signed letters) reaching each state."""
    k = cert.arity
    words = [None] * len(cert)
    words[0] = ()
    for s, nx in enumerate(cert.nexts):
        for j, t in enumerate(nx):
            if t is not None and words[t] is None:
                words[t] = words[s] + ((j + 1) if j < k else -(j - k + 1),)
    return words
