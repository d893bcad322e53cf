"""Prime colourings, separating matrices and central quotients of Hall's group.

A colouring assigns 1 or a prime to each point of the positive cone
(Z^2)_+ = {(m,n): m > 0 or (m = 0 and n > 0)}; the quotient H_phi makes the
central generator c_v of order phi(v) (phi(v) = 1 kills it).
"""

import hashlib
import json
from dataclasses import dataclass, field

from sympy import isprime

from .balls import ball, balls_agree, first_divergence
from .marked import MarkedGroup
from .models import Hall


def normalize(v):
    """Representative of +-v in the positive cone."""
    m, n = v
    if m > 0 or (m == 0 and n > 0):
        return (m, n)
    return (-m, -n)


def positive_box(R):
    """Positive-cone points of {-R..R}^2, ordered by sup-norm then lexicographically."""
    pts = [(m, n) for m in range(0, R + 1) for n in range(-R, R + 1)
           if m > 0 or n > 0]
    return sorted(pts, key=lambda p: (max(abs(p[0]), abs(p[1])), p))


def apply(M, v):
    return (M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1])


def det(M):
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


IDENTITY = ((1, 0), (0, 1))


@dataclass
class PrimeColouring:
    assignments: dict = field(default_factory=dict)
    default: int = 1
    log: list = field(default_factory=list)

    def __post_init__(self):
        for v, p in self.assignments.items():
            if normalize(v) != v:
                raise ValueError(f"{v} is not in the positive cone")
            if p != 1 and not isprime(p):
                raise ValueError(f"colour {p} is neither 1 nor prime")
        self.assignments = {v: p for v, p in self.assignments.items() if p != self.default}

    def value(self, v):
        if v == (0, 0):
            return 0
        return self.assignments.get(normalize(v), self.default)

    def primes(self):
        out = {p for p in self.assignments.values() if p != 1}
        if self.default != 1:
            out.add(self.default)
        return out

    @property
    def name(self):
        return hashlib.sha1(self.core_bytes()).hexdigest()[:12]

    def core_bytes(self):
        pts = sorted([m, n, p] for (m, n), p in self.assignments.items())
        return json.dumps({"default": self.default, "assignments": pts},
                          sort_keys=True, separators=(",", ":")).encode()

    def to_json(self):
        return {"default": self.default,
                "assignments": sorted([m, n, p] for (m, n), p in self.assignments.items()),
                "log": [{"matrix": [list(r) for r in M],
                         "theta": sorted([m, n, p] for (m, n), p in theta.items())}
                        for M, theta in self.log]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data):
        c = cls({(m, n): p for m, n, p in data.get("assignments", [])}, data.get("default", 1))
        c.log = [(tuple(tuple(r) for r in s["matrix"]), {(m, n): p for m, n, p in s["theta"]})
                 for s in data.get("log", [])]
        return c

    def replay(self):
        """Assignments rebuilt from the log alone."""
        out = {}
        for M, theta in self.log:
            for z, p in theta.items():
                w = normalize(apply(M, z))
                if p != self.default:
                    out[w] = p
                else:
                    out.pop(w, None)
        return out

    def restrict(self, R):
        """The finite colouring z -> phi(z) on the positive points of {-R..R}^2."""
        return {z: self.value(z) for z in positive_box(R)}

    def radius(self):
        """Sup-norm radius of everything fixed so far (assignments and logged boxes)."""
        r = max((max(abs(a), abs(b)) for a, b in self.assignments), default=0)
        for M, theta in self.log:
            for z in theta:
                w = apply(M, z)
                r = max(r, abs(w[0]), abs(w[1]))
        return r


def load_colouring(path):
    with open(path) as fh:
        return PrimeColouring.from_json(json.load(fh))


def constant_colouring(value=1):
    return PrimeColouring({}, value)


def single_colouring(point, p):
    return PrimeColouring({normalize(point): p})


# ----------------------------------------------------------- matrices

def sl2_separating_matrix(S, R):
    """det 1 and M({-R..R}^2) meets {-S..S}^2 only at the origin."""
    if S < 0 or R < 0:
        raise ValueError("S and R must be nonnegative")
    return (((S + 1) * (S + R + 1) + 1, S + 1), (S + R + 1, 1))


def separates(M, S, R):
    for m in range(-R, R + 1):
        for n in range(-R, R + 1):
            if (m, n) == (0, 0):
                continue
            a, b = apply(M, (m, n))
            if abs(a) <= S and abs(b) <= S:
                return False
    return True


def in_gamma2(M):
    return M[0][0] % 2 == 1 and M[1][1] % 2 == 1 and M[0][1] % 2 == 0 and M[1][0] % 2 == 0


def _theta_radius(theta):
    return max((max(abs(a), abs(b)) for a, b in theta), default=0)


def _pad_theta(theta, R):
    out = {z: 1 for z in positive_box(R)}
    out.update({normalize(z): p for z, p in theta.items()})
    return out


def universal_colouring(primes, thetas, seed=(), base=None):
    """Embed each finite colouring theta_j far out via a fresh separating matrix.

    Step j uses a matrix in Gamma(2) exactly when j (1-based) is in ``seed``;
    each theta is a dict from points to colours in primes + {1}.
    """
    primes = set(primes)
    if len(primes) < 2:
        raise ValueError("need at least two primes")
    phi = base if base is not None else PrimeColouring()
    seed = set(seed)
    for j, theta in enumerate(thetas, start=1):
        bad = {p for p in theta.values() if p != 1 and p not in primes}
        if bad:
            raise ValueError(f"theta_{j} uses primes {sorted(bad)} outside {sorted(primes)}")
        R = _theta_radius(theta)
        want_gamma = j in seed
        if want_gamma and R % 2:
            R += 1
        theta = _pad_theta(theta, R)
        S = phi.radius()
        # parity of S decides membership in Gamma(2): S odd (with R even) lands inside
        if want_gamma and S % 2 == 0:
            S += 1
        if not want_gamma and S % 2 == 1:
            S += 1
        M = sl2_separating_matrix(S, R)
        assert det(M) == 1 and in_gamma2(M) == want_gamma
        add_step(phi, M, theta)
    return phi


def add_step(phi, M, theta):
    phi.log.append((M, dict(theta)))
    for z, p in theta.items():
        w = normalize(apply(M, z))
        if p != phi.default:
            phi.assignments[w] = p
        else:
            phi.assignments.pop(w, None)
    return phi


def seed_colouring(primes, R=2):
    """Put the sorted primes on the first positive-cone points near the origin (identity step)."""
    theta = {z: 1 for z in positive_box(R)}
    for z, p in zip(positive_box(R), sorted(primes)):
        theta[z] = p
    return add_step(PrimeColouring(), IDENTITY, theta)


# --------------------------------------------------------------- groups

def hall_quotient(phi):
    return MarkedGroup.standard(Hall(phi))


@dataclass
class HallWitness:
    source: MarkedGroup
    target: MarkedGroup
    matrix: tuple
    radius: int


class HallWitnessError(ValueError):
    pass


def find_matrix(phi, psi, R):
    """An SL2 matrix M with phi(Mz) = psi(z) on the positive points of {-R..R}^2."""
    want = psi.restrict(R)
    cands = [IDENTITY] + [M for M, _ in phi.log]
    for M in cands:
        if all(phi.value(apply(M, z)) == p for z, p in want.items()):
            return M
    return None


def hall_witness(phi, psi, R):
    """Source H_phi marked by (x^a y^c, x^b y^d, a) for M = [[a,b],[c,d]], target H_psi standard."""
    missing = psi.primes() - phi.primes()
    if missing:
        raise HallWitnessError(
            f"primes {sorted(missing)} of the target are not torsion primes of the source")
    M = find_matrix(phi, psi, R)
    if M is None:
        raise HallWitnessError(f"no logged matrix realises the target colouring on radius {R}")
    src = Hall(phi)
    heads = [src.head(apply(M, (1, 0))), src.head(apply(M, (0, 1)))]
    source = MarkedGroup(src, elements=heads + [src.gens()[2]])
    return HallWitness(source, hall_quotient(psi), M, R)


def verify_hall_witness(w, R=None, cap=200_000):
    R = w.radius if R is None else R
    c1, c2 = ball(w.source, R, cap), ball(w.target, R, cap)
    return {"agree": balls_agree(c1, c2), "first_divergence": first_divergence(c1, c2),
            "states": len(c1)}


def torsion_primes_in_ball(mg, R, cap=200_000):
    """Primes occurring as element orders inside the radius-R ball."""
    from sympy import primefactors
    c = ball(mg, R, cap)
    out = set()
    for g in c.elements:
        o = mg.model.order(g, cap=64)
        if o > 1:
            out |= set(primefactors(o))
    return out


def realize_finite_poset(subsets, R=2, verify_radius=2):
    """Verdict matrix for H_{X_i} converging to H_{X_j}, where I_i = {2,3} + X_i.

    Each phi_i is seeded with its primes near the origin and then made to
    contain the radius-R pictures of every phi_j with I_j inside I_i.
    """
    sets = [frozenset({2, 3}) | frozenset(x) for x in subsets]
    if any(p in (2, 3) for x in subsets for p in x):
        raise ValueError("the subsets must avoid the primes 2 and 3")
    seeds = [seed_colouring(I, R) for I in sets]
    phis = []
    for i, I in enumerate(sets):
        thetas = [seeds[j].restrict(R) for j, J in enumerate(sets) if J <= I and j != i]
        phi = seed_colouring(I, R)
        universal_colouring(I, thetas, base=phi)
        phis.append(phi)
    verdicts = []
    for i in range(len(sets)):
        row = []
        for j in range(len(sets)):
            try:
                w = hall_witness(phis[i], phis[j], R)
            except HallWitnessError as exc:
                row.append({"verdict": False, "reason": str(exc)})
                continue
            res = verify_hall_witness(w, verify_radius)
            row.append({"verdict": res["agree"], "reason": "witness",
                        "matrix": [list(r) for r in w.matrix]})
        verdicts.append(row)
    return {"sets": [sorted(s) for s in sets], "colourings": phis, "verdicts": verdicts}
