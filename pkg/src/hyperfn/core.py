"""Hyperfunctions as finite sums of closed-form defining terms.

A hyperfunction is the boundary-value difference of an upper and a lower
holomorphic branch::

    hyp(F+, F-)(x) = lim_{s -> 0+} F+(x + i s) - F-(x - i s)

Each :class:`HyperTerm` carries one analytic expression ``f`` from a small
catalog together with a branch pair ``(u, l)`` so that ``F+ = coeff * u * f``
and ``F- = coeff * l * f``.  Log- and pole-type terms default to ``u = l = 1``
(same expression above and below), constants and rationals to ``(1, 0)`` (an
ordinary function).

Catalog (``w = z - a``)::

    CONSTANT            f = 1
    STEP_LOG(a, n)      f = -w**n / n! * log(-w) / j        -> (x-a)**n/n! for x >= a
    DELTA_POLE(a, n)    f = n-th derivative of -1/(j w)     -> delta^(n)(x-a)
    INTERVAL_LOG(a, b)  f = log((b - z)/(a - z)) / j        -> 1 on [a, b)
    RATIONAL(p, q)      f = p(z)/q(z)

with ``j = 2*pi*i`` and principal-branch logarithms.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    InvalidTerm,
    NoConvergence,
    TooCloseToSingularity,
    UnsupportedOrder,
)

J = 2j * math.pi


class Kind(str, enum.Enum):
    CONSTANT = "CONSTANT"
    STEP_LOG = "STEP_LOG"
    DELTA_POLE = "DELTA_POLE"
    INTERVAL_LOG = "INTERVAL_LOG"
    RATIONAL = "RATIONAL"


class _Singular:
    """Marker returned by :func:`eval_closed` at a point where the boundary
    value does not exist as a number (pole, or unregularized log jump)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "IS_SINGULAR"

    def __bool__(self):
        return False


IS_SINGULAR = _Singular()


def _as_complex(value, name="value") -> complex:
    c = complex(value)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise InvalidTerm(f"{name} must be finite, got {value!r}")
    return c


def _trim(coeffs: Iterable[float]) -> tuple[float, ...]:
    out = [float(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0.0:
        out.pop()
    return tuple(out) if out else (0.0,)


_DEFAULT_PAIR = {
    Kind.CONSTANT: (1 + 0j, 0j),
    Kind.RATIONAL: (1 + 0j, 0j),
    Kind.STEP_LOG: (1 + 0j, 1 + 0j),
    Kind.DELTA_POLE: (1 + 0j, 1 + 0j),
    Kind.INTERVAL_LOG: (1 + 0j, 1 + 0j),
}


@dataclass(frozen=True)
class HyperTerm:
    kind: Kind
    coeff: complex = 1 + 0j
    params: tuple = ()
    pair: tuple[complex, complex] | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "coeff", _as_complex(self.coeff, "coeff"))
        pair = _DEFAULT_PAIR[kind] if self.pair is None else self.pair
        if len(pair) != 2:
            raise InvalidTerm("pair must have two entries")
        object.__setattr__(
            self, "pair", (_as_complex(pair[0], "pair"), _as_complex(pair[1], "pair"))
        )
        object.__setattr__(self, "params", self._check_params(kind, self.params))

    @staticmethod
    def _check_params(kind: Kind, params) -> tuple:
        params = tuple(params)
        if kind is Kind.CONSTANT:
            if params:
                raise InvalidTerm("CONSTANT takes no params")
            return ()
        if kind in (Kind.STEP_LOG, Kind.DELTA_POLE):
            if len(params) not in (1, 2):
                raise InvalidTerm(f"{kind.value} takes (a,) or (a, n)")
            a = float(params[0])
            n = int(params[1]) if len(params) == 2 else 0
            if not math.isfinite(a):
                raise InvalidTerm("breakpoints must be finite reals")
            if n < 0 or (len(params) == 2 and n != params[1]):
                raise InvalidTerm("order n must be a non-negative integer")
            return (a, n)
        if kind is Kind.INTERVAL_LOG:
            if len(params) != 2:
                raise InvalidTerm("INTERVAL_LOG takes (a, b)")
            a, b = float(params[0]), float(params[1])
            if not (math.isfinite(a) and math.isfinite(b)):
                raise InvalidTerm("breakpoints must be finite reals")
            if not a < b:
                raise InvalidTerm(f"INTERVAL_LOG requires a < b, got {a}, {b}")
            return (a, b)
        # RATIONAL
        if len(params) != 2:
            raise InvalidTerm("RATIONAL takes (numerator, denominator)")
        num, den = _trim(params[0]), _trim(params[1])
        if not all(math.isfinite(c) for c in num + den):
            raise InvalidTerm("polynomial coefficients must be finite")
        if all(c == 0.0 for c in den):
            raise InvalidTerm("RATIONAL denominator is identically zero")
        return (num, den)

    # -- structure ---------------------------------------------------------

    def scaled(self, factor: complex) -> "HyperTerm":
        return HyperTerm(self.kind, self.coeff * factor, self.params, self.pair)

    def with_pair(self, upper: complex, lower: complex) -> "HyperTerm":
        return HyperTerm(self.kind, self.coeff, self.params, (upper, lower))

    def poles(self) -> tuple[complex, ...]:
        """All points (possibly non-real) where ``f`` is not holomorphic."""
        if self.kind is Kind.CONSTANT:
            return ()
        if self.kind in (Kind.STEP_LOG, Kind.DELTA_POLE):
            return (complex(self.params[0]),)
        if self.kind is Kind.INTERVAL_LOG:
            return (complex(self.params[0]), complex(self.params[1]))
        den = self.params[1]
        if len(den) == 1:
            return ()
        return tuple(complex(r) for r in np.roots(den[::-1]))

    def singular_points(self) -> tuple[float, ...]:
        """Real points where the boundary value may jump or blow up."""
        if self.kind is Kind.RATIONAL:
            pts = []
            for r in self.poles():
                if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)):
                    pts.append(r.real)
            return tuple(sorted(pts))
        return tuple(p.real for p in self.poles())

    # -- evaluation of the bare expression --------------------------------

    def f(self, z):
        """Evaluate the analytic expression (numpy-vectorised over ``z``)."""
        z = np.asarray(z, dtype=complex)
        kind = self.kind
        if kind is Kind.CONSTANT:
            return np.ones_like(z)
        if kind is Kind.STEP_LOG:
            a, n = self.params
            w = z - a
            return -(w**n) / math.factorial(n) * np.log(-w) / J
        if kind is Kind.DELTA_POLE:
            a, n = self.params
            w = z - a
            return -((-1) ** n) * math.factorial(n) / (J * w ** (n + 1))
        if kind is Kind.INTERVAL_LOG:
            a, b = self.params
            return np.log((b - z) / (a - z)) / J
        num, den = self.params
        return P.polyval(z, num) / P.polyval(z, den)

    def boundary_closed(self, x: float):
        """Exact ``(f(x+i0), f(x-i0))``, or ``None`` where it does not exist."""
        kind = self.kind
        if kind is Kind.CONSTANT:
            return 1 + 0j, 1 + 0j
        if kind is Kind.STEP_LOG:
            a, n = self.params
            w = x - a
            if w == 0.0:
                return (0j, 0j) if n > 0 else None
            lead = -(w**n) / math.factorial(n) / J
            if w > 0:
                lw = math.log(w)
                return lead * complex(lw, -math.pi), lead * complex(lw, math.pi)
            val = lead * math.log(-w)
            return val, val
        if kind is Kind.DELTA_POLE:
            a, n = self.params
            w = x - a
            if w == 0.0:
                return None
            val = -((-1) ** n) * math.factorial(n) / (J * w ** (n + 1))
            return val, val
        if kind is Kind.INTERVAL_LOG:
            a, b = self.params
            if x == a or x == b:
                return None
            q = (b - x) / (a - x)
            if q > 0:
                val = math.log(q) / J
                return val, val
            lq = math.log(-q)
            return complex(lq, math.pi) / J, complex(lq, -math.pi) / J
        num, den = self.params
        qx = P.polyval(x, den)
        if qx == 0.0:
            return None
        val = complex(P.polyval(x, num) / qx)
        return val, val

    def eval_closed(self, x: float):
        u, l = self.pair
        bv = self.boundary_closed(x)
        if bv is None:
            # right-limit regularisation of the log jumps when both branches agree
            if u == l and self.kind is Kind.STEP_LOG:
                return self.coeff * u * (1.0 if self.params[1] == 0 else 0.0)
            if u == l and self.kind is Kind.INTERVAL_LOG:
                return self.coeff * u * (1.0 if x == self.params[0] else 0.0)
            return IS_SINGULAR
        fp, fm = bv
        return self.coeff * (u * fp - l * fm)

    # -- calculus ---------------------------------------------------------

    def derivative(self) -> list["HyperTerm"]:
        kind, c, pair = self.kind, self.coeff, self.pair
        if kind is Kind.CONSTANT:
            return []
        if kind is Kind.STEP_LOG:
            a, n = self.params
            if n == 0:
                return [HyperTerm(Kind.DELTA_POLE, c, (a, 0), pair)]
            poly = _shifted_power(a, n - 1)
            return [
                HyperTerm(Kind.STEP_LOG, c, (a, n - 1), pair),
                HyperTerm(Kind.RATIONAL, -c / (math.factorial(n) * J), (poly, (1.0,)), pair),
            ]
        if kind is Kind.DELTA_POLE:
            a, n = self.params
            return [HyperTerm(Kind.DELTA_POLE, c, (a, n + 1), pair)]
        if kind is Kind.INTERVAL_LOG:
            a, b = self.params
            return [
                HyperTerm(Kind.DELTA_POLE, c, (a, 0), pair),
                HyperTerm(Kind.DELTA_POLE, -c, (b, 0), pair),
            ]
        num, den = self.params
        new_num = P.polysub(P.polymul(P.polyder(num), den), P.polymul(num, P.polyder(den)))
        if np.all(new_num == 0):
            return []
        return [HyperTerm(Kind.RATIONAL, c, (new_num, P.polymul(den, den)), pair)]

    def antiderivative(self) -> list["HyperTerm"]:
        kind, c, pair = self.kind, self.coeff, self.pair
        if kind is Kind.CONSTANT:
            return [HyperTerm(Kind.RATIONAL, c, ((0.0, 1.0), (1.0,)), pair)]
        if kind is Kind.STEP_LOG:
            a, n = self.params
            k = n + 1
            poly = _shifted_power(a, k)
            return [
                HyperTerm(Kind.STEP_LOG, c, (a, k), pair),
                HyperTerm(Kind.RATIONAL, c / (math.factorial(k) * k * J), (poly, (1.0,)), pair),
            ]
        if kind is Kind.DELTA_POLE:
            a, n = self.params
            if n == 0:
                return [HyperTerm(Kind.STEP_LOG, c, (a, 0), pair)]
            return [HyperTerm(Kind.DELTA_POLE, c, (a, n - 1), pair)]
        if kind is Kind.INTERVAL_LOG:
            a, b = self.params
            out = HyperTerm(Kind.STEP_LOG, c, (a, 0), pair).antiderivative()
            out += HyperTerm(Kind.STEP_LOG, -c, (b, 0), pair).antiderivative()
            return out
        return _rational_antiderivative(self)


def _shifted_power(a: float, n: int) -> tuple[float, ...]:
    """Coefficients (ascending) of (z - a)**n."""
    return tuple(float(v) for v in P.polypow((-a, 1.0), n))


def _rational_antiderivative(term: HyperTerm) -> list[HyperTerm]:
    c, pair = term.coeff, term.pair
    num, den = (np.asarray(p, dtype=float) for p in term.params)
    quo, rem = P.polydiv(num, den)
    out = []
    if np.any(quo != 0):
        out.append(HyperTerm(Kind.RATIONAL, c, (P.polyint(quo), (1.0,)), pair))
    if len(den) == 1 or np.all(rem == 0):
        return out

    roots = np.roots(den[::-1])
    scale = max(1.0, float(np.max(np.abs(roots))))
    if np.any(np.abs(roots.imag) > 1e-7 * scale):
        raise UnsupportedOrder("antiderivative of a rational term needs all poles real")
    # group repeated roots
    groups: list[list[float]] = []
    for r in sorted(roots.real):
        if groups and abs(r - groups[-1][-1]) <= 1e-5 * scale:
            groups[-1].append(r)
        else:
            groups.append([r])
    poles = [(float(np.mean(g)), len(g)) for g in groups]

    lead = den[-1]
    full = np.array([lead])
    for a, m in poles:
        full = P.polymul(full, P.polypow((-a, 1.0), m))
    basis, index = [], []
    for a, m in poles:
        for k in range(1, m + 1):
            part, _ = P.polydiv(full, P.polypow((-a, 1.0), k))
            basis.append(part)
            index.append((a, k))
    deg = len(den) - 1
    mat = np.zeros((deg, len(basis)))
    for col, b in enumerate(basis):
        mat[: len(b), col] = b[:deg]
    rhs = np.zeros(deg)
    rhs[: len(rem)] = rem[:deg]
    coeffs = np.linalg.solve(mat, rhs)

    for (a, k), ck in zip(index, coeffs):
        if ck == 0:
            continue
        if k == 1:
            # 1/(z-a) = -j * (-1/(j (z-a)))  and the delta term integrates to a step
            out.append(HyperTerm(Kind.STEP_LOG, -J * c * ck, (a, 0), pair))
        else:
            den_k = _shifted_power(a, k - 1)
            out.append(HyperTerm(Kind.RATIONAL, c * ck / (1 - k), ((1.0,), den_k), pair))
    return out


# -- constructors ---------------------------------------------------------


def constant(c: complex = 1.0, pair=None) -> HyperTerm:
    return HyperTerm(Kind.CONSTANT, 1.0, (), pair if pair is not None else (c, 0))


def step(a: float, coeff: complex = 1.0, power: int = 0) -> HyperTerm:
    return HyperTerm(Kind.STEP_LOG, coeff, (a, power))


def delta(a: float, coeff: complex = 1.0, order: int = 0) -> HyperTerm:
    return HyperTerm(Kind.DELTA_POLE, coeff, (a, order))


def interval(a: float, b: float, coeff: complex = 1.0) -> HyperTerm:
    return HyperTerm(Kind.INTERVAL_LOG, coeff, (a, b))


def rational(num: Sequence[float], den: Sequence[float] = (1.0,), coeff: complex = 1.0,
             pair=None) -> HyperTerm:
    return HyperTerm(Kind.RATIONAL, coeff, (tuple(num), tuple(den)), pair)


# -- hyperfunction ---------------------------------------------------------


@dataclass(frozen=True)
class Hyperfunction:
    terms: tuple[HyperTerm, ...] = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            if not isinstance(t, HyperTerm):
                raise InvalidTerm(f"not a HyperTerm: {t!r}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *terms: HyperTerm) -> "Hyperfunction":
        return cls(tuple(terms))

    def __add__(self, other):
        if isinstance(other, HyperTerm):
            other = Hyperfunction.of(other)
        if not isinstance(other, Hyperfunction):
            return NotImplemented
        return Hyperfunction(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if isinstance(other, HyperTerm):
            other = Hyperfunction.of(other)
        if not isinstance(other, Hyperfunction):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        # products of two hyperfunctions do not exist in general; scalars only
        if isinstance(scalar, (Hyperfunction, HyperTerm)) or not isinstance(
            scalar, (int, float, complex, np.number)
        ):
            return NotImplemented
        return Hyperfunction(tuple(t.scaled(scalar) for t in self.terms))

    __rmul__ = __mul__

    def __len__(self):
        return len(self.terms)

    def singular_points(self) -> tuple[float, ...]:
        return tuple(sorted({p for t in self.terms for p in t.singular_points()}))

    def poles(self) -> tuple[complex, ...]:
        return tuple(p for t in self.terms for p in t.poles())

    def to_dict(self) -> dict:
        return {"terms": [_term_to_dict(t) for t in self.terms]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "Hyperfunction":
        try:
            return cls(tuple(_term_from_dict(d) for d in doc["terms"]))
        except (KeyError, TypeError) as exc:
            raise InvalidTerm(f"malformed hyperfunction document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Hyperfunction":
        return cls.from_dict(json.loads(text))


def _cx(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _term_to_dict(t: HyperTerm) -> dict:
    if t.kind is Kind.RATIONAL:
        params = [list(t.params[0]), list(t.params[1])]
    elif t.kind in (Kind.STEP_LOG, Kind.DELTA_POLE):
        params = [t.params[0], t.params[1]]
    else:
        params = list(t.params)
    return {
        "kind": t.kind.value,
        "coeff": _cx(t.coeff),
        "params": params,
        "pair": [_cx(t.pair[0]), _cx(t.pair[1])],
    }


def _term_from_dict(d: dict) -> HyperTerm:
    def cx(v):
        if isinstance(v, dict):
            return complex(v.get("re", 0.0), v.get("im", 0.0))
        return complex(v)

    pair = d.get("pair")
    kind = Kind(d["kind"])
    params = d.get("params", [])
    if kind in (Kind.STEP_LOG, Kind.DELTA_POLE) and len(params) == 2:
        params = [params[0], int(params[1])]
    return HyperTerm(
        kind,
        cx(d.get("coeff", 1.0)),
        params,
        None if pair is None else (cx(pair[0]), cx(pair[1])),
    )


# -- evaluation -----------------------------------------------------------


def _default_ladder() -> tuple[float, ...]:
    return tuple(1e-2 * 2.0**-k for k in range(13))


@dataclass(frozen=True)
class EvalConfig:
    sigma_sequence: tuple[float, ...] = field(default_factory=_default_ladder)
    extrapolation_order: int = 4
    tolerance: float = 1e-9
    jump_guard: float = 1e-7
    # shrink the ladder in proportion to the distance to the nearest pole
    adaptive: bool = True

    def __post_init__(self):
        seq = tuple(float(s) for s in self.sigma_sequence)
        object.__setattr__(self, "sigma_sequence", seq)
        if len(seq) < 2 or any(s <= 0 for s in seq):
            raise ValueError("sigma_sequence needs at least two positive values")
        if any(b >= a for a, b in zip(seq, seq[1:])):
            raise ValueError("sigma_sequence must be strictly decreasing")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.extrapolation_order < 0 or self.extrapolation_order >= len(seq):
            raise ValueError("extrapolation_order must be in [0, len(sigma_sequence))")


DEFAULT_CONFIG = EvalConfig()


def _check_guard(hf: Hyperfunction, x: float, cfg: EvalConfig) -> None:
    for s in hf.singular_points():
        if abs(x - s) < cfg.jump_guard:
            raise TooCloseToSingularity(
                f"x={x!r} lies within {cfg.jump_guard:g} of singular point {s!r}"
            )


def _richardson(values: np.ndarray, sigmas: np.ndarray, order: int) -> np.ndarray:
    """Neville-style elimination of the first ``order`` powers of sigma.

    Returns the fully extrapolated column (one entry per window)."""
    table = np.array(values, dtype=complex)
    for m in range(1, order + 1):
        ratio = sigmas[: len(table) - 1] / sigmas[m : m + len(table) - 1]
        table = table[1:] + (table[1:] - table[:-1]) / (ratio - 1.0)
    return table


def _branch_differences(hf: Hyperfunction, x: float, sigmas: np.ndarray,
                        offset: complex = 0j) -> np.ndarray:
    up = x + 1j * sigmas
    lo = x - 1j * sigmas
    total = np.zeros(len(sigmas), dtype=complex)
    for t in hf.terms:
        u, l = t.pair
        total += t.coeff * ((u * t.f(up) + offset) - (l * t.f(lo) + offset))
    return total


def _extrapolate(hf: Hyperfunction, x: float, cfg: EvalConfig, offset: complex = 0j) -> complex:
    _check_guard(hf, x, cfg)
    if not hf.terms:
        return 0j
    sigmas = np.asarray(cfg.sigma_sequence)
    if cfg.adaptive:
        poles = hf.poles()
        if poles:
            dist = min(abs(complex(x) - p) for p in poles)
            if dist > 0:
                sigmas = sigmas * min(1.0, dist)
    values = _branch_differences(hf, x, sigmas, offset)
    est = _richardson(values, sigmas, cfg.extrapolation_order)
    if len(est) >= 2:
        best, prev = est[-1], est[-2]
        if abs(best - prev) > cfg.tolerance * max(1.0, abs(best)):
            raise NoConvergence(
                f"successive extrapolants differ by {abs(best - prev):.3g} at x={x!r}"
            )
    return complex(est[-1])


def eval_numeric(hf: Hyperfunction, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Boundary value of ``hf`` at ``x`` by extrapolating sigma -> 0+.

    Raises TooCloseToSingularity inside the jump guard and NoConvergence when
    the last two extrapolants disagree by more than ``cfg.tolerance``
    (relative to ``max(1, |value|)``).
    """
    return _extrapolate(hf, float(x), cfg)


def eval_closed(hf: Hyperfunction, x: float):
    """Exact piecewise value of ``hf`` at ``x``.

    At a step or interval edge the right limit is returned (value 1 at ``a``
    for a step at ``a``); at a pole the result is :data:`IS_SINGULAR`.
    """
    x = float(x)
    total = 0j
    for t in hf.terms:
        v = t.eval_closed(x)
        if v is IS_SINGULAR:
            return IS_SINGULAR
        total += v
    return total


def differintegrate(hf: Hyperfunction, p: complex = 1) -> Hyperfunction:
    """Differentiate (``p > 0``) or integrate (``p < 0``) ``|p|`` times.

    Only integer orders are supported; integration constants are dropped.
    """
    p = complex(p)
    if p == 0:
        return hf
    if p.imag != 0 or p.real != math.floor(p.real):
        raise UnsupportedOrder(f"only integer orders are supported, got {p!r}")
    n = int(p.real)
    terms = list(hf.terms)
    for _ in range(abs(n)):
        nxt: list[HyperTerm] = []
        for t in terms:
            nxt.extend(t.derivative() if n > 0 else t.antiderivative())
        terms = [t for t in nxt if t.coeff != 0]
    return Hyperfunction(tuple(terms))


def equivalent(a: Hyperfunction, b: Hyperfunction, sample_points: Iterable[float],
               cfg: EvalConfig = DEFAULT_CONFIG) -> bool:
    """True iff the boundary values of ``a`` and ``b`` agree at every sample.

    Defining pairs may differ arbitrarily; only boundary values count.
    """
    for x in sample_points:
        if abs(eval_numeric(a, x, cfg) - eval_numeric(b, x, cfg)) > cfg.tolerance:
            return False
    return True


def path_sum_invariance_check(hf: Hyperfunction, x: float, winding: int,
                              cfg: EvalConfig = DEFAULT_CONFIG) -> bool:
    """Offset both branches by ``winding`` full loops (``winding * j`` per
    singular term) and confirm the boundary value does not move."""
    if not hf.singular_points():
        raise InvalidTerm("hyperfunction has no singular point to wind around")
    if abs(int(winding)) > 8 or winding != int(winding):
        raise ValueError("winding must be an integer with |winding| <= 8")
    loops = sum(t.coeff for t in hf.terms if t.singular_points())
    plain = _extrapolate(hf, float(x), cfg)
    wound = _extrapolate(hf, float(x), cfg, offset=int(winding) * J * loops)
    return abs(plain - wound) <= cfg.tolerance * max(1.0, abs(plain))


def hyperfunction(*terms: HyperTerm) -> Hyperfunction:
    return Hyperfunction(tuple(terms))
