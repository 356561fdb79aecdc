"""Regularly varying correlation tails rho, their primitives I(t), and the decay-rate functional.

The family catalog is restricted to closed-form-verifiable shapes so every limit
computed numerically here can be cross-checked against an analytic oracle:

  powerlaw(alpha, c):    rho(s) = (1 + s/c)^(-alpha),  alpha >= 0, c > 0
  powersplice(alpha):    rho(s) = min(1, s^(-alpha))
  reciprocal:            rho(s) = 1/(1+s)
  powerlog(alpha, beta): rho(s) = (1+s)^(-alpha) * (1 + log(1+s))^(-beta)
  explog(theta):         rho(s) = exp(-(log(1+s))^theta),  theta in (0,1)  [index 0]

All families map [0, inf) into (0, 1] and are regularly varying of order -alpha.
"""

from __future__ import annotations

import bisect
import json
import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DomainTooSmall, Divergent, Undecided, Unsupported, ValidationError

_FAMILIES = ("powerlaw", "powersplice", "reciprocal", "powerlog", "explog")

# families whose rho is completely monotone (mixtures of exponentials), hence
# usable as stationary correlation functions without a per-call PD check
CM_FAMILIES = ("powerlaw", "reciprocal", "powerlog")


@dataclass(frozen=True)
class RegVarFn:
    """A regularly varying function rho: [0,inf) -> (0,1] of index -alpha."""

    family: str
    alpha: float
    c: float = 1.0      # scale for powerlaw
    beta: float = 0.0   # log exponent for powerlog
    theta: float = 0.0  # exponent for explog

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if self.alpha < 0:
            raise ValidationError("alpha must be >= 0")
        if self.family == "powerlaw" and self.c <= 0:
            raise ValidationError("powerlaw scale c must be > 0")
        if self.family == "explog" and not (0.0 < self.theta < 1.0):
            raise ValidationError("explog theta must lie in (0,1)")
        if self.family == "explog" and self.alpha != 0.0:
            raise ValidationError("explog is slowly varying: alpha must be 0")
        if self.family == "reciprocal" and self.alpha != 1.0:
            raise ValidationError("reciprocal has alpha = 1")
        if self.family == "powerlog" and self.beta < 0:
            raise ValidationError("powerlog beta must be >= 0")

    # -- evaluation ---------------------------------------------------------

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise ValidationError("rho is defined on [0, inf)")
        if self.family == "powerlaw":
            out = (1.0 + s / self.c) ** (-self.alpha)
        elif self.family == "powersplice":
            out = np.where(s <= 1.0, 1.0, np.maximum(s, 1.0) ** (-self.alpha))
        elif self.family == "reciprocal":
            out = 1.0 / (1.0 + s)
        elif self.family == "powerlog":
            l1 = np.log1p(s)
            out = (1.0 + s) ** (-self.alpha) * (1.0 + l1) ** (-self.beta)
        else:  # explog
            out = np.exp(-np.log1p(s) ** self.theta)
        if not np.all(np.isfinite(out)):
            raise ValidationError("rho evaluated to a non-finite value")
        return out if out.ndim else float(out)

    @property
    def is_completely_monotone(self) -> bool:
        return self.family in CM_FAMILIES

    @property
    def decays_to_zero(self) -> bool:
        return not (self.family == "powerlaw" and self.alpha == 0.0)

    # -- closed forms (oracles; the production path is quadrature) ----------

    def closed_primitive(self, t: float) -> float | None:
        """Analytic I(t) where the family admits one, else None."""
        a = self.alpha
        if self.family == "powerlaw":
            if a == 0.0:
                return t
            if a == 1.0:
                return self.c * math.log1p(t / self.c)
            return self.c * ((1.0 + t / self.c) ** (1.0 - a) - 1.0) / (1.0 - a)
        if self.family == "reciprocal":
            return math.log1p(t)
        if self.family == "powersplice":
            if t <= 1.0:
                return t
            if a == 1.0:
                return 1.0 + math.log(t)
            return 1.0 + (t ** (1.0 - a) - 1.0) / (1.0 - a)
        if self.family == "powerlog" and a == 1.0:
            u = 1.0 + math.log1p(t)
            if self.beta == 1.0:
                return math.log(u)
            return (u ** (1.0 - self.beta) - 1.0) / (1.0 - self.beta)
        return None

    def closed_primitive_vec(self, t):
        """Vectorized closed-form I(t), or None if the family has no closed form."""
        a = self.alpha
        t = np.asarray(t, dtype=float)
        if self.family == "powerlaw":
            if a == 0.0:
                return t.copy()
            if a == 1.0:
                return self.c * np.log1p(t / self.c)
            return self.c * ((1.0 + t / self.c) ** (1.0 - a) - 1.0) / (1.0 - a)
        if self.family == "reciprocal":
            return np.log1p(t)
        if self.family == "powersplice":
            ts = np.maximum(t, 1.0)
            if a == 1.0:
                tail = 1.0 + np.log(ts)
            else:
                tail = 1.0 + (ts ** (1.0 - a) - 1.0) / (1.0 - a)
            return np.where(t <= 1.0, t, tail)
        if self.family == "powerlog" and a == 1.0:
            u = 1.0 + np.log1p(t)
            if self.beta == 1.0:
                return np.log(u)
            return (u ** (1.0 - self.beta) - 1.0) / (1.0 - self.beta)
        return None

    def tail_class(self) -> str:
        """'convergent' or 'divergent' for I(inf), decided analytically per family."""
        a = self.alpha
        if a > 1.0:
            return "convergent"
        if a < 1.0:
            return "divergent"
        # alpha == 1: log-corrections decide
        if self.family in ("powerlaw", "powersplice", "reciprocal"):
            return "divergent"
        if self.family == "powerlog":
            return "convergent" if self.beta > 1.0 else "divergent"
        return "unknown"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        params = {}
        if self.family == "powerlaw":
            params["c"] = self.c
        if self.family == "powerlog":
            params["beta"] = self.beta
        if self.family == "explog":
            params["theta"] = self.theta
        return json.dumps({"family": self.family, "alpha": self.alpha, "params": params})

    @staticmethod
    def from_json(text: str | dict) -> "RegVarFn":
        obj = json.loads(text) if isinstance(text, str) else text
        params = obj.get("params", {})
        return RegVarFn(obj["family"], float(obj["alpha"]),
                        c=float(params.get("c", 1.0)),
                        beta=float(params.get("beta", 0.0)),
                        theta=float(params.get("theta", 0.0)))


def constant_rho() -> RegVarFn:
    """rho identically 1 (alpha = 0 power law)."""
    return RegVarFn("powerlaw", 0.0)


# ---------------------------------------------------------------------------
# primitives
# ---------------------------------------------------------------------------

class PrimitiveTable:
    """Cached cumulative quadrature of rho over canonical dyadic panels.

    Breakpoints are 0, 1, 2, 4, 8, ... so a value I(t) is the sum of the cached
    panels below t plus one partial panel [2^k, t]; the cache makes repeated
    evaluation cheap and the panel layout makes results independent of query
    order.  Values are strictly increasing in t whenever the mass of rho between
    two query points exceeds the quadrature tolerance.  Appends are serialized
    behind a lock; concurrent readers are safe.
    """

    PANEL_EPSABS_SHARE = 1.0 / 64.0

    def __init__(self, f: RegVarFn, tol: float = 1e-10):
        if tol <= 0:
            raise ValidationError("tol must be > 0")
        self.f = f
        self.tol = tol
        self.breakpoints = [0.0]   # 0, 1, 2, 4, ... (grown on demand)
        self.values = [0.0]        # cumulative I at breakpoints
        self.errors = [0.0]
        self._lock = threading.Lock()

    def _panel(self, a: float, b: float) -> tuple[float, float]:
        val, err = quad(self.f, a, b,
                        epsabs=self.tol * self.PANEL_EPSABS_SHARE,
                        epsrel=1e-12, limit=200)
        return val, err

    def _extend_to(self, t: float) -> None:
        with self._lock:
            while self.breakpoints[-1] < t and (
                    len(self.breakpoints) == 1 or 2.0 * self.breakpoints[-1] <= t):
                nxt = 1.0 if self.breakpoints[-1] == 0.0 else 2.0 * self.breakpoints[-1]
                val, err = self._panel(self.breakpoints[-1], nxt)
                self.breakpoints.append(nxt)
                self.values.append(self.values[-1] + val)
                self.errors.append(self.errors[-1] + err)

    def eval(self, t: float) -> float:
        if t < 0:
            raise ValidationError("t must be >= 0")
        if t == 0.0:
            return 0.0
        self._extend_to(t)
        i = bisect.bisect_right(self.breakpoints, t) - 1
        base = self.values[i]
        lo = self.breakpoints[i]
        if t == lo:
            return base
        val, _ = self._panel(lo, t)
        return base + val

    def error_at(self, t: float) -> float:
        self._extend_to(t)
        i = bisect.bisect_right(self.breakpoints, t) - 1
        return self.errors[i] + self.tol * self.PANEL_EPSABS_SHARE


_TABLES: dict[tuple, PrimitiveTable] = {}
_TABLES_LOCK = threading.Lock()


def primitive_table(f: RegVarFn, tol: float = 1e-10) -> PrimitiveTable:
    key = (f, tol)
    with _TABLES_LOCK:
        tab = _TABLES.get(key)
        if tab is None:
            tab = _TABLES[key] = PrimitiveTable(f, tol)
    return tab


def primitive(f: RegVarFn, t: float, tol: float = 1e-10) -> float:
    """I(t) = integral of rho over [0, t], by cached adaptive quadrature."""
    if t < 0:
        raise ValidationError("t must be >= 0")
    return primitive_table(f, tol).eval(t)


def primitive_vec(f: RegVarFn, t, tol: float = 1e-10):
    """Vectorized I(t): closed form when the family has one, else the cached table."""
    t = np.asarray(t, dtype=float)
    closed = f.closed_primitive_vec(t)
    if closed is not None:
        return closed
    tab = primitive_table(f, tol)
    return np.vectorize(tab.eval, otypes=[float])(t)


@dataclass(frozen=True)
class TailValue:
    """I(inf) estimate with a stated error: quadrature to a cutoff plus Karamata tail."""
    value: float
    error: float
    cutoff: float


def primitive_infty(f: RegVarFn, tol: float = 1e-10) -> TailValue:
    """I(inf) for alpha > 1; raises Divergent/Undecided otherwise.

    The value is I(cutoff) by quadrature plus the Karamata tail b*rho(b)/(alpha-1);
    the cutoff doubles until two successive estimates agree to within tol
    (relative floor 1e-12), and the stated error is that disagreement.
    """
    cls = f.tail_class()
    if cls == "divergent":
        raise Divergent(f"I(inf) diverges for {f.family} with alpha={f.alpha}")
    if cls == "unknown":
        raise Undecided("tail behaviour at alpha = 1 cannot be decided for this family")
    tab = primitive_table(f, tol)
    a = f.alpha

    def estimate(b: float) -> float:
        if a > 1.0:
            return tab.eval(b) + b * f(b) / (a - 1.0)
        # alpha == 1 convergent: only powerlog(1, beta>1), whose tail integral is exact
        return tab.eval(b) + (1.0 + math.log1p(b)) ** (1.0 - f.beta) / (f.beta - 1.0)

    b = 1024.0
    prev = estimate(b)
    for _ in range(40):
        b *= 2.0
        cur = estimate(b)
        if abs(cur - prev) <= max(tol, 1e-12 * abs(cur)):
            return TailValue(cur, abs(cur - prev) + tab.error_at(b), b)
        prev = cur
    raise Undecided("tail estimate did not stabilize at the configured cutoffs")


def decay_rate(f: RegVarFn, t: float, tol: float = 1e-10) -> float:
    """a(t) = t * log I(t) / I(t); requires I(t) > 1 so the log is positive."""
    it = primitive(f, t, tol)
    if it <= 1.0:
        raise DomainTooSmall(f"I({t}) = {it} <= 1; decay rate undefined this early")
    return t * math.log(it) / it


# ---------------------------------------------------------------------------
# numeric verifiers of the regular-variation limits
# ---------------------------------------------------------------------------

def rv_index_check(f: RegVarFn, lambdas, t_grid) -> float:
    """max over the grid of |rho(lambda t)/rho(t) - lambda^(-alpha)|."""
    lambdas = np.asarray(lambdas, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(lambdas <= 0):
        raise ValidationError("lambdas must be positive")
    lam = lambdas[:, None]
    t = t_grid[None, :]
    dev = np.abs(f(lam * t) / f(t) - lam ** (-f.alpha))
    return float(dev.max())


def karamata_ratio(f: RegVarFn, a: float, b: float, tol: float = 1e-10) -> float:
    """(I(b) - I(a)) / (L(b) * (b^(1-alpha) - a^(1-alpha))) with L(x) = x^alpha rho(x).

    Converges to 1/(1-alpha) for alpha < 1 (any 0 <= a < b) and to 1/(alpha-1)
    for alpha > 1 (any a > b, including a = inf, where the tail form
    (I(inf)-I(b)) / (b rho(b)) is used).  alpha = 1 is outside the regime.
    """
    al = f.alpha
    if al == 1.0:
        raise Unsupported("karamata ratio excludes alpha = 1")
    if al < 1.0:
        if not (0.0 <= a < b):
            raise ValidationError("alpha < 1 requires 0 <= a < b")
    else:
        if not (b < a):
            raise ValidationError("alpha > 1 requires a > b (a may be inf)")
    lb = b ** al * f(b)
    if math.isinf(a):
        tail = primitive_infty(f, tol).value - primitive(f, b, tol)
        return tail / (lb * b ** (1.0 - al))
    num = primitive(f, b, tol) - primitive(f, a, tol)
    den = lb * (b ** (1.0 - al) - a ** (1.0 - al))
    return num / den


def riemann_limit(f: RegVarFn, mu: float, T: float, tol: float = 1e-10) -> float:
    """Sum of rho(l*M) for l = 1..ceil(T/M), with M = mu * I(T); tends to 1/mu.

    Hypotheses: alpha in [0,1]; rho -> 0 when alpha = 0; I(inf) = inf when alpha = 1.
    """
    if mu <= 0 or T <= 0:
        raise ValidationError("mu and T must be positive")
    if f.alpha > 1.0:
        raise Unsupported("riemann limit requires alpha in [0,1]")
    if f.alpha == 0.0 and not f.decays_to_zero:
        raise Unsupported("alpha = 0 requires rho -> 0")
    if f.alpha == 1.0 and f.tail_class() != "divergent":
        raise Unsupported("alpha = 1 requires I(inf) = inf")
    M = mu * primitive(f, T, tol)
    n = int(math.ceil(T / M))
    ell = np.arange(1, n + 1, dtype=float)
    return float(np.sum(f(ell * M)))
