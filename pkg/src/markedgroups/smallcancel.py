"""Pieces and the C'(lambda) condition for finite sets of cyclic words.

A piece is a common prefix of two cyclic permutations taken at different
positions of the symmetrised set.  For two rotations of the same word (same
orientation) shifted by d the overlap is capped at n - d, so a proper power
s^k has pieces of length |s^k| - |s|.
"""

from dataclasses import dataclass
from fractions import Fraction

from .words import Word, cyclic_reduce


@dataclass(frozen=True)
class SCReport:
    ok: bool
    max_piece: int
    min_len: int


def _symmetrized(words):
    """Entries (class id, rotation index, rotated letters, n)."""
    out = []
    for idx, w in enumerate(words):
        letters = cyclic_reduce(w)[1].letters if isinstance(w, Word) else tuple(w)
        n = len(letters)
        if n == 0:
            raise ValueError("trivial relator")
        for sign, base in ((1, letters), (-1, tuple(-x for x in reversed(letters)))):
            for i in range(n):
                out.append(((idx, sign), i, base[i:] + base[:i], n))
    return out


def _cap(a, b):
    (ca, ia, _, n), (cb, ib, _, m) = a, b
    if ca == cb:
        return n - ((ib - ia) % n)
    return min(n, m)


def max_piece_brute(words):
    """All ordered pairs, letter by letter."""
    sym = _symmetrized(words)
    best = 0
    for a in sym:
        for b in sym:
            if a[0] == b[0] and a[1] == b[1]:
                continue
            cap = _cap(a, b)
            k = 0
            ra, rb = a[2], b[2]
            while k < cap and ra[k] == rb[k]:
                k += 1
            best = max(best, k)
    return best


def _lcp(x, y):
    k = 0
    n = min(len(x), len(y))
    while k < n and x[k] == y[k]:
        k += 1
    return k


def max_piece(words):
    """Sorted-rotation computation of the largest piece."""
    sym = _symmetrized(words)
    order = sorted(range(len(sym)), key=lambda i: sym[i][2])
    adj = [_lcp(sym[order[t]][2], sym[order[t + 1]][2]) for t in range(len(order) - 1)]
    best = 0
    # different classes: the best partner of each entry is its nearest other-class neighbour
    for t, i in enumerate(order):
        cls = sym[i][0]
        run = None
        for u in range(t + 1, len(order)):
            run = adj[u - 1] if run is None else min(run, adj[u - 1])
            if run <= best:
                break
            if sym[order[u]][0] != cls:
                best = max(best, min(run, _cap(sym[i], sym[order[u]])))
                break
    # same class: range minima over the sorted block of that class
    by_class = {}
    for i in order:
        by_class.setdefault(sym[i][0], []).append(i)
    for members in by_class.values():
        strs = [sym[i][2] for i in members]
        ladj = [_lcp(strs[t], strs[t + 1]) for t in range(len(strs) - 1)]
        for t in range(len(members)):
            run = None
            for u in range(t + 1, len(members)):
                run = ladj[u - 1] if run is None else min(run, ladj[u - 1])
                if run <= best:
                    break
                a, b = sym[members[t]], sym[members[u]]
                best = max(best, min(run, max(_cap(a, b), _cap(b, a))))
    return best


def verify_small_cancellation(words, lam=Fraction(1, 6)):
    words = list(words)
    if not words:
        raise ValueError("empty word set")
    lengths = [len(cyclic_reduce(w)[1]) if isinstance(w, Word) else len(w) for w in words]
    mp = max_piece(words)
    return SCReport(mp < Fraction(lam) * min(lengths), mp, min(lengths))


def pattern_word(exponents, arity=2):
    """x1 x2^e1 x1 x2^e2 ... as a Word."""
    letters = []
    for e in exponents:
        letters += [1] + [2] * e
    return Word(tuple(letters), arity)


def small_cancellation_words(rank, count, min_len, lam=Fraction(1, 6), max_block=200):
    """count words over x1, x2; word j uses the exponents j+1, j+1+count, ... (s of them).

    Interleaving the residue classes keeps the words of comparable length, so
    the smallest working s grows slowly with count.
    """
    if rank < 2:
        raise ValueError("small cancellation words need rank at least 2")
    for s in range(1, max_block + 1):
        words = [pattern_word(range(j + 1, count * s + 1, count), rank) for j in range(count)]
        if min(len(w) for w in words) < min_len:
            continue
        if verify_small_cancellation(words, lam).ok:
            return words
    raise RuntimeError(f"no C'({lam}) family with block size <= {max_block}")


def pattern_threshold(lam=Fraction(1, 6), upto=60):
    """Least s0 such that x y x y^2 ... x y^s satisfies C'(lam) for every s0 <= s <= upto."""
    ok = [verify_small_cancellation([pattern_word(range(1, s + 1))], lam).ok
          for s in range(1, upto + 1)]
    s0 = None
    for s in range(upto, 0, -1):
        if not ok[s - 1]:
            break
        s0 = s
    return s0
