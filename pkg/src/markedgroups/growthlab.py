"""Growth experiments: the alpha constant and ball counts over the Grigorchuk orbit."""

import time
from dataclasses import dataclass

from .balls import DEFAULT_CAP, ball, balls_agree
from .marked import MarkedGroup
from .models import PermWreathGrig


def alpha_residual(a):
    """2^(3-3/a) + 2^(2-2/a) + 2^(1-1/a) - 2, increasing on (0, 1]."""
    return 2 ** (3 - 3 / a) + 2 ** (2 - 2 / a) + 2 ** (1 - 1 / a) - 2


@dataclass(frozen=True)
class AlphaRoot:
    lo: float
    hi: float
    steps: int

    @property
    def alpha(self):
        return (self.lo + self.hi) / 2

    @property
    def error(self):
        return (self.hi - self.lo) / 2

    def certified(self):
        """The bracket still shows a sign change of the residual."""
        return alpha_residual(self.lo) < 0 < alpha_residual(self.hi)

    def to_json(self):
        return {"alpha": self.alpha, "error": self.error, "lo": self.lo, "hi": self.hi,
                "residual_lo": alpha_residual(self.lo), "residual_hi": alpha_residual(self.hi),
                "steps": self.steps}


def solve_alpha(tolerance=1e-12, lo=0.5, hi=1.0):
    """Bisection on a bracket with a sign change; stops when the half-width is below tolerance."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if not alpha_residual(lo) < 0 < alpha_residual(hi):
        raise ValueError(f"[{lo}, {hi}] does not bracket the root")
    steps = 0
    while (hi - lo) / 2 > tolerance:
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if alpha_residual(mid) < 0:
            lo = mid
        else:
            hi = mid
        steps += 1
    return AlphaRoot(lo, hi, steps)


def nueg_signature(lamp, R_list, cap=DEFAULT_CAP, threads=1):
    """Per R: witness marking S_R of lamp wr_X Grig, agreement with the abelian-lamp target, rates."""
    from .witnesses import grig_wreath
    rows = []
    std = MarkedGroup.standard(PermWreathGrig(lamp))
    for R in R_list:
        if R < 1:
            raise ValueError("radii must be positive")
        t0 = time.perf_counter()
        w = grig_wreath(lamp, R)
        cw = ball(w.source, R, cap, threads)
        ct = ball(w.target, R, cap, threads)
        cs = ball(std, R, cap, threads)
        rows.append({"R": R, "points": w.params["points"], "agree": balls_agree(cw, ct),
                     "nu_witness": len(cw), "nu_target": len(ct), "nu_std": len(cs),
                     "rate_witness": len(cw) ** (1.0 / R), "rate_std": len(cs) ** (1.0 / R),
                     "millis": round(1000 * (time.perf_counter() - t0), 3)})
    return rows


def nueg_csv(rows):
    out = ["R,nu_witness,nu_std,rate_witness,rate_std,agree"]
    for r in rows:
        out.append(f"{r['R']},{r['nu_witness']},{r['nu_std']},{r['rate_witness']:.12f},"
                   f"{r['rate_std']:.12f},{str(r['agree']).lower()}")
    return "\n".join(out) + "\n"
