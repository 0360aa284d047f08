"""Constants of the induced Mader argument and the named constant profiles."""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import iv

# Working precision (bits) for the interval checks; all verdicts come from
# interval endpoints, so a "feasible" answer is never a rounding artefact.
PRECISION = 256

# (ell, m) for d = 4, 5 and d >= 6, with s = d+1, eta = 1/20, D = d**43.
COROLLARY_TUPLES = {4: (205, 4814), 5: (136, 3423), 6: (113, 5000)}
GIRTH_CEILING = 8 * 10**6


@contextmanager
def _precision(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _iv(x) -> "iv.mpf":
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    return iv.mpf(x)


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class MaderParameters:
    s: int
    eta: Fraction
    D: int
    a: int
    alpha: Fraction
    gamma: Fraction
    q: int
    Q: int
    ell: int
    L: int
    C: int
    p: Fraction
    c0: Fraction
    D0: int
    m: int
    girth_threshold: int
    mu: object  # mpmath interval for gamma * alpha^(ell-3) / (e (C+1))
    log_pi: object  # interval for log(pi) = -mu/8
    feasible: bool
    failed_conditions: tuple[str, ...] = ()
    overridden: tuple[str, ...] = ()

    def to_json_obj(self) -> dict:
        def frac(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        def big(x: int):
            # huge values are summarised by bit length to keep traces small
            return x if x.bit_length() <= 256 else {"bits": x.bit_length()}

        def interval(x) -> list[str]:
            return [mpmath.nstr(mpmath.mpf(x.a.a), 12), mpmath.nstr(mpmath.mpf(x.b.b), 12)]

        with _precision(PRECISION):
            return {
                "s": self.s, "eta": frac(self.eta), "D": big(self.D), "a": self.a,
                "alpha": frac(self.alpha), "gamma": frac(self.gamma), "q": self.q, "Q": self.Q,
                "ell": self.ell, "L": self.L, "C": big(self.C),
                "D0": big(self.D0), "m": self.m, "girth_threshold": self.girth_threshold,
                "mu": interval(self.mu), "log_pi": interval(self.log_pi),
                "feasible": self.feasible, "failed_conditions": list(self.failed_conditions),
                "overridden": list(self.overridden),
            }


_OVERRIDABLE = ("q", "Q", "p", "D0", "girth_threshold")


def mader_parameters(
    s: int,
    eta,
    D: int,
    ell: int,
    m: int,
    overrides: Optional[dict] = None,
) -> MaderParameters:
    """Derive every constant and check the feasibility inequalities.

    Without ``overrides`` the inputs must satisfy ``s >= 4``, ``eta > 0`` and
    ``D >= s-1``. ``overrides`` may replace ``q``, ``Q``, ``p``, ``D0`` or
    ``girth_threshold`` for desk-scale experiments (then ``s >= 3`` is
    accepted); feasibility is still evaluated and reported.
    """
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(_OVERRIDABLE)
    if unknown:
        raise ValueError(f"cannot override {sorted(unknown)}")
    eta = Fraction(eta)
    if s < (3 if overrides else 4) or eta <= 0 or D < s - 1 or ell < 1 or m < 0:
        raise ValueError("need s >= 4, eta > 0, D >= s-1, ell >= 1 and m >= 0")
    a = s - 1
    alpha = Fraction(s - 2, 2) + eta / 4
    gamma = alpha - 1
    q = overrides.get("q", 10 * a * a + a + 1)
    Q = overrides.get("Q", 9 * q * q)
    L = 4 * ell + 1
    C = (L + 1) * (D + 1)
    p = Fraction(overrides.get("p", Fraction(1, C + 1)))
    if not 0 < p <= 1:
        raise ValueError("sampling probability must lie in (0, 1]")
    spread = D - s + 2
    c0 = eta / (4 * max(spread, 1) * D ** (2 * ell))
    if "D0" in overrides:
        D0 = overrides["D0"]
    else:
        D0 = max(_ceil_fraction(2 / (p * c0)), 2 * D ** (2 * ell + 1), Q, D)
    girth_threshold = overrides.get("girth_threshold", max(12 * ell + 5, L * (2 * m + 2)))

    failed = []
    with _precision(PRECISION):
        if gamma > 0:
            mu = _iv(gamma) * _iv(alpha) ** (ell - 3) / (iv.e * (C + 1))
            log_mu = iv.log(_iv(gamma)) + (ell - 3) * iv.log(_iv(alpha)) - 1 - iv.log(iv.mpf(C + 1))
        else:
            mu = iv.mpf(0)
            log_mu = None
        log_pi = -mu / 8
        # mu >= 18 Q
        if log_mu is None or not (log_mu.a >= iv.log(iv.mpf(18 * Q)).b):
            failed.append("mu >= 18Q")
        # pi <= 1/(e(4 D^(12 ell + 5) + 1))  <=>  mu/8 >= 1 + log(4 D^(12 ell+5) + 1)
        rhs = 1 + iv.log(4 * iv.mpf(D) ** (12 * ell + 5) + 1)
        if not (mu.a / 8 >= rhs.b):
            failed.append("pi <= 1/(e(4D^(12l+5)+1))")
        # 2 e D pi < p c0 / 8  <=>  mu/8 > log(16 e D / (p c0))
        rhs = iv.log(16 * iv.e * D / _iv(p * c0))
        if not (mu.a / 8 > rhs.b):
            failed.append("2eD*pi < p*c0/8")
    # exact integer check
    if 2 * (q * q - 1) ** m < 11 * q * q * D0 * D0:
        failed.append("2(q^2-1)^m >= 11q^2D0^2")

    return MaderParameters(
        s=s, eta=eta, D=D, a=a, alpha=alpha, gamma=gamma, q=q, Q=Q, ell=ell, L=L, C=C,
        p=p, c0=c0, D0=D0, m=m, girth_threshold=girth_threshold, mu=mu, log_pi=log_pi,
        feasible=not failed, failed_conditions=tuple(failed), overridden=tuple(sorted(overrides)),
    )


def corollary_parameters(d: int) -> MaderParameters:
    """The parameters used for ``d >= 4``: s = d+1, eta = 1/20, D = d^43."""
    if d < 4:
        raise ValueError("the corollary needs d >= 4")
    ell, m = COROLLARY_TUPLES[min(d, 6)]
    return mader_parameters(d + 1, Fraction(1, 20), d**43, ell, m)


# --- profiles -------------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Every constant of the pipeline in one place.

    ``paper`` keeps the published values. ``desk`` scales them so that hosts
    with tens to hundreds of vertices exercise every stage.
    """

    name: str
    g0: int  # girth hypothesis of the main theorem
    lemma_girth: int  # girth floor of the unbalanced and cleaning steps
    b_exponent: int  # B = {v : deg(v) >= d ** b_exponent}
    unbalanced_factor: int  # unbalanced step runs when |A| > factor * d^2 * |B|
    case1_fraction: Fraction  # Case 1 when |A'| >= fraction * n
    delta0_factor: int  # Delta_0 = factor * d
    kappa_factor: int  # kappa = factor * d^4
    beta: Fraction  # size constant of the cleaning conclusion (i)
    eta: Fraction
    mader_ell: Optional[int] = None  # None: corollary tuple for d
    mader_m: Optional[int] = None
    mader_overrides: dict = field(default_factory=dict)
    mader_D: Optional[int] = None  # None: d ** b_exponent
    relax_girth: bool = False
    unbalanced_rate: Optional[Fraction] = None  # None: 1/(6d)
    case1_rate: Optional[Fraction] = None  # None: 1/(2d)

    def with_overrides(self, over: dict) -> "Profile":
        over = dict(over)
        if "case1_fraction" in over:
            over["case1_fraction"] = Fraction(over["case1_fraction"])
        for key in ("beta", "eta", "unbalanced_rate", "case1_rate"):
            if over.get(key) is not None:
                over[key] = Fraction(over[key])
        unknown = set(over) - set(self.__dataclass_fields__) - {"base"}
        if unknown:
            raise ValueError(f"unknown profile keys {sorted(unknown)}")
        over.pop("base", None)
        over.setdefault("name", "custom")
        return replace(self, **over)

    def mader_for(self, d: int, D: Optional[int] = None) -> MaderParameters:
        D = D if D is not None else (self.mader_D or d**self.b_exponent)
        if self.mader_ell is None:
            ell, m = COROLLARY_TUPLES[min(max(d, 4), 6)]
        else:
            ell, m = self.mader_ell, self.mader_m or 0
        return mader_parameters(d + 1, self.eta, max(D, d), ell, m, self.mader_overrides or None)

    def to_json_obj(self) -> dict:
        out = {}
        for k in self.__dataclass_fields__:
            v = getattr(self, k)
            if isinstance(v, Fraction):
                v = f"{v.numerator}/{v.denominator}"
            elif isinstance(v, dict):
                v = {kk: (f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else x) for kk, x in v.items()}
            out[k] = v
        return out


PAPER = Profile(
    name="paper",
    g0=GIRTH_CEILING,
    lemma_girth=54,
    b_exponent=43,
    unbalanced_factor=60,
    case1_fraction=Fraction(81, 100),
    delta0_factor=800,
    kappa_factor=3 * 10**7,
    beta=Fraction(1, 10**12),
    eta=Fraction(1, 20),
)

DESK = Profile(
    name="desk",
    g0=5,
    lemma_girth=5,
    b_exponent=2,
    unbalanced_factor=1,
    case1_fraction=Fraction(1, 2),
    delta0_factor=8,
    kappa_factor=2,
    beta=Fraction(1, 1000),
    eta=Fraction(1, 20),
    mader_ell=1,
    mader_m=1,
    mader_overrides={"q": 1, "Q": 1, "p": Fraction(1), "D0": 1, "girth_threshold": 5},
    relax_girth=True,
    unbalanced_rate=Fraction(1, 2),
    case1_rate=Fraction(1, 2),
)

PROFILES = {"paper": PAPER, "desk": DESK}


def resolve_profile(spec) -> Profile:
    """A profile name, a Profile, or a dict of overrides (``"base"`` picks the starting profile)."""
    if isinstance(spec, Profile):
        return spec
    if isinstance(spec, str):
        try:
            return PROFILES[spec]
        except KeyError:
            raise ValueError(f"unknown profile {spec!r}") from None
    if isinstance(spec, dict):
        base = PROFILES.get(spec.get("base", "desk"))
        if base is None:
            raise ValueError(f"unknown base profile {spec.get('base')!r}")
        return base.with_overrides(spec)
    raise ValueError("profile must be a name or an object of overrides")


def log10_bound(x: int) -> float:
    """Approximate log10 of a big positive integer without converting it to a string."""
    return x.bit_length() * math.log10(2) if x > 0 else float("-inf")
