"""The first Grigorchuk group acting on the right of binary sequences.

Elements are portraits: either a nucleus letter in {'e','a','b','c','d'} or a
node (swap, left, right) whose children are portraits.  A node is collapsed
into a letter whenever it equals that nucleus element, which makes the form
canonical (we stop descending exactly where the section lies in the nucleus).
"""

from functools import lru_cache

NUCLEUS = ("e", "a", "b", "c", "d")
LETTERS = ("a", "b", "c", "d")

# section decomposition of nucleus letters: (swap, section at 0, section at 1)
_DECOMP = {
    "e": (0, "e", "e"),
    "a": (1, "e", "e"),
    "b": (0, "a", "c"),
    "c": (0, "a", "d"),
    "d": (0, "e", "b"),
}
_COLLAPSE = {v: k for k, v in _DECOMP.items()}

# {e,b,c,d} is a Klein four-group
_KLEIN = {
    ("b", "c"): "d", ("c", "b"): "d",
    ("b", "d"): "c", ("d", "b"): "c",
    ("c", "d"): "b", ("d", "c"): "b",
}

IDENTITY = "e"


def decompose(g):
    if isinstance(g, str):
        return _DECOMP[g]
    return g


def node(swap, left, right):
    key = (swap, left, right)
    return _COLLAPSE.get(key, key)


@lru_cache(maxsize=1 << 18)
def mul(g, h):
    """Product g*h: apply g first, then h (right action)."""
    if g == "e":
        return h
    if h == "e":
        return g
    if isinstance(g, str) and isinstance(h, str):
        if g == h:
            return "e"
        if (g, h) in _KLEIN:
            return _KLEIN[(g, h)]
    sg, g0, g1 = decompose(g)
    sh, h0, h1 = decompose(h)
    # (gh)|_x = g|_x h|_{x^g}
    if sg:
        return node(sg ^ sh, mul(g0, h1), mul(g1, h0))
    return node(sh, mul(g0, h0), mul(g1, h1))


@lru_cache(maxsize=1 << 16)
def inv(g):
    if isinstance(g, str):
        return g
    s, g0, g1 = g
    if s:
        return node(1, inv(g1), inv(g0))
    return node(0, inv(g0), inv(g1))


def is_identity(g):
    return g == "e"


def from_letters(word):
    """Evaluate a string or sequence over a,b,c,d."""
    g = "e"
    for x in word:
        g = mul(g, x)
    return g


def section(g, bit):
    s, g0, g1 = decompose(g)
    return g1 if bit else g0


def swaps(g):
    return decompose(g)[0]


def apply(g, point):
    """Image of a finite binary string under g (length preserving)."""
    if not point:
        raise ValueError("empty point")
    out = []
    for ch in point:
        s, g0, g1 = decompose(g)
        bit = int(ch)
        out.append(str(bit ^ s))
        g = g1 if bit else g0
    return "".join(out)


def apply_zero_tail(g, point):
    """Image of point.0^inf, with points written as binary strings without trailing zeros."""
    out = []
    for ch in point:
        s, g0, g1 = decompose(g)
        bit = int(ch)
        out.append(str(bit ^ s))
        g = g1 if bit else g0
    # follow the section along the zero tail until it is trivial on 0^inf
    while g != "e" and g != "d":
        s, g0, g1 = decompose(g)
        out.append(str(s))
        g = g0
    return "".join(out).rstrip("0")


def depth(g):
    if isinstance(g, str):
        return 0
    return 1 + max(depth(g[1]), depth(g[2]))


def serialize(g):
    if isinstance(g, str):
        return g
    return f"({g[0]}{serialize(g[1])}{serialize(g[2])})"


# ------------------------------------------------ word-contraction oracle

_SEC = {"b": ("a", "c"), "c": ("a", "d"), "d": ("", "b")}


def reduce_word(word):
    """Normal form a?x a x a ... using a^2 = 1 and the Klein relations among b,c,d."""
    out = []
    for x in word:
        if x == "e":
            continue
        if out and out[-1] == x:
            out.pop()
        elif out and x != "a" and out[-1] != "a":
            y = _KLEIN[(out.pop(), x)]
            out.append(y)
        else:
            out.append(x)
    return "".join(out)


def word_is_identity(word):
    """Word problem by the classical contraction recursion, independent of portraits."""
    w = reduce_word(word)
    if not w:
        return True
    if w.count("a") % 2:
        return False
    parts = []
    for start in (0, 1):
        pos = start
        piece = []
        for x in w:
            if x == "a":
                pos ^= 1
            else:
                piece.append(_SEC[x][pos])
        parts.append("".join(piece))
    return all(word_is_identity(p) for p in parts)


def words_equal(u, v):
    inv_v = "".join(reversed(v))  # every generator is an involution
    return word_is_identity(u + inv_v)


def element_order(g, cap=1 << 16):
    """Order of a portrait by repeated squaring; 0 means larger than cap."""
    n, h = 1, g
    while n <= cap:
        if h == "e":
            return n
        h = mul(h, h)
        n *= 2
    return 0


def word_order(word, cap=1 << 16):
    n = 1
    while n <= cap:
        if word_is_identity(word * n):
            return n
        n *= 2
    return 0


def abelianization(word):
    """Image in (Z/2)^3 under a->(1,0,0), b->(0,1,0), c->(0,0,1), d->(0,1,1)."""
    v = [0, 0, 0]
    img = {"a": (1, 0, 0), "b": (0, 1, 0), "c": (0, 0, 1), "d": (0, 1, 1), "e": (0, 0, 0)}
    for x in word:
        for i in range(3):
            v[i] ^= img[x][i]
    return tuple(v)
