"""Certified enclosures of the hitting probabilities q_n and their bounds.

``q_n`` is the probability that a random function hits a fixed cylinder of
length ``n``. It satisfies

    q_1 = (sqrt(45) - 5) / 2,    q_{n+1} = (3/2) sqrt(1 + 4 q_n) - 3/2 - q_n,

and decreases to the fixed point 3/4. Everything here is computed with
outward-rounded dyadic intervals, and every inequality check returns a
three-way verdict: certified true, certified false, or inconclusive.

The recursion map phi(q) is increasing for q < 2 (its derivative is
3 / sqrt(1 + 4q) - 1), so intervals are propagated endpoint by endpoint.
Near 3/4 the derivative is 1/2, so widths contract and only the per-step
rounding (a few units of 2**-p) accumulates: width(q_n) <= 2**(-p + 3).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .dyadic import DyadicInterval, DyadicRational, exp_enclosure, iv_sqrt
from .errors import PrecisionExhausted

THREE_QUARTERS = DyadicRational(3, -2)
MAX_WIDTH_LOG2 = -8
PRECISION_CAP = 4096


class Verdict(enum.Enum):
    CERTIFIED_TRUE = "Certified-True"
    INCONCLUSIVE = "Inconclusive"
    CERTIFIED_FALSE = "Certified-False"

    def __str__(self):
        return self.value


def _decide(holds: bool, refuted: bool) -> Verdict:
    if holds:
        return Verdict.CERTIFIED_TRUE
    if refuted:
        return Verdict.CERTIFIED_FALSE
    return Verdict.INCONCLUSIVE


def _check_width(iv: DyadicInterval, what: str):
    if iv.width_log2() > MAX_WIDTH_LOG2:
        raise PrecisionExhausted(what, iv.width_log2())


def _phi_point(q: DyadicRational, p: int) -> DyadicInterval:
    s = iv_sqrt(DyadicInterval(1 + 4 * q), p)
    half3 = DyadicRational(3, -1)
    return DyadicInterval(half3 * s.lo - half3 - q, half3 * s.hi - half3 - q).round(p)


def recursion_step(q: DyadicInterval, p: int) -> DyadicInterval:
    """Outward-rounded image of ``q`` under the q-recursion (0 <= q < 2)."""
    q = DyadicInterval.coerce(q)
    if q.lo < 0 or q.hi >= 2:
        raise ValueError("the recursion is monotone only on [0, 2)")
    return DyadicInterval(_phi_point(q.lo, p).lo, _phi_point(q.hi, p).hi)


def q1_enclosure(p: int) -> DyadicInterval:
    s = iv_sqrt(DyadicInterval(45), p + 1)
    return DyadicInterval((s.lo - 5) * DyadicRational(1, -1),
                          (s.hi - 5) * DyadicRational(1, -1))


@dataclass(frozen=True)
class QnTable:
    """Enclosures of ``q_1 .. q_{n_max + 1}``.

    The extra entry lets ratio and power checks run up to ``n_max``.
    ``q(n)`` and ``eps(n)`` are 1-indexed.
    """

    precision_bits: int
    n_max: int
    entries: tuple[DyadicInterval, ...]
    eps_entries: tuple[DyadicInterval, ...]

    def q(self, n: int) -> DyadicInterval:
        return self.entries[n - 1]

    def eps(self, n: int) -> DyadicInterval:
        return self.eps_entries[n - 1]


@lru_cache(maxsize=64)
def q_table(n_max: int, p: int) -> QnTable:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    q = q1_enclosure(p)
    entries = [q]
    for _ in range(n_max):
        q = recursion_step(q, p)
        entries.append(q)
    for n, iv in enumerate(entries, 1):
        _check_width(iv, f"q_{n}")
        if not (iv.lo > THREE_QUARTERS and iv.hi < 1):
            raise PrecisionExhausted(f"q_{n} inside (3/4, 1)", iv.width_log2())
        if n > 1 and not entries[n - 2].lo > iv.hi:
            raise PrecisionExhausted(f"q_{n - 1} > q_{n}", iv.width_log2())
    eps = tuple(iv - THREE_QUARTERS for iv in entries)
    return QnTable(p, n_max, tuple(entries), eps)


def _with_retry(check: Callable[[QnTable], list], t: QnTable,
                cap: int = PRECISION_CAP) -> list:
    """Run ``check``; while anything is inconclusive, double the precision."""
    p = t.precision_bits
    while True:
        result = check(t)
        if all(_worst(v.values() if isinstance(v, dict) else [v])
               is not Verdict.INCONCLUSIVE for _, v in result) or 2 * p > cap:
            return result
        p *= 2
        t = q_table(t.n_max, p)


def _pow2(k: int) -> DyadicRational:
    return DyadicRational(1, k)


def epsilon_bounds(t: QnTable, n: int) -> dict[str, Verdict]:
    """Bounds (a)-(d) on eps_n = q_n - 3/4 at one index."""
    e, e1 = t.eps(n), t.eps(n + 1)
    half = DyadicRational(1, -1)
    out = {}
    # (a) eps_{n+1} <= eps_n / 2
    out["a"] = _decide(e1.hi <= e.lo * half, e1.lo > e.hi * half)
    # (b) eps_n <= 2^-(n+2)
    b = _pow2(-(n + 2))
    out["b"] = _decide(e.hi <= b, e.lo > b)
    # (c) eps_{n+1} >= eps_n / 2 - 2^-(2n+5)
    c = _pow2(-(2 * n + 5))
    out["c"] = _decide(e1.lo >= e.hi * half - c, e1.hi < e.lo * half - c)
    # (d) eps_n >= 1 / (2^(n+5) - 1)
    d = Fraction(1, (1 << (n + 5)) - 1)
    out["d"] = _decide(e.lo >= d, e.hi < d)
    return out


def verify_epsilon_bounds(t: QnTable, retry: bool = True) -> list[tuple[int, dict[str, Verdict]]]:
    def check(tab):
        return [(n, epsilon_bounds(tab, n)) for n in range(1, tab.n_max + 1)]

    return _with_retry(check, t) if retry else check(t)


def _worst(verdicts) -> Verdict:
    verdicts = list(verdicts)
    if Verdict.CERTIFIED_FALSE in verdicts:
        return Verdict.CERTIFIED_FALSE
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.CERTIFIED_TRUE


def ratio_bound(t: QnTable, n: int, offset: int = 6) -> Verdict:
    """q_{n+1} / q_n <= 1 - 2^-(n + offset)."""
    factor = 1 - _pow2(-(n + offset))
    qn, qn1 = t.q(n), t.q(n + 1)
    return _decide(qn1.hi <= qn.lo * factor, qn1.lo > qn.hi * factor)


def verify_ratio_bound(t: QnTable, offset: int = 6, retry: bool = True) -> list[tuple[int, Verdict]]:
    def check(tab):
        return [(n, ratio_bound(tab, n, offset)) for n in range(1, tab.n_max + 1)]

    return _with_retry(check, t) if retry else check(t)


@lru_cache(maxsize=32)
def exp_minus_1_32(p: int) -> DyadicInterval:
    """Enclosure of e^(-1/32)."""
    return exp_enclosure(Fraction(-1, 32), p)


def ratio_factor(t: QnTable, n: int) -> DyadicInterval:
    """Enclosure of 2 (q_{n+1} / q_n) - 1."""
    p = t.precision_bits
    r = t.q(n + 1).divide(t.q(n), p)
    return 2 * r - 1


def power_value(t: QnTable, n: int) -> DyadicInterval:
    """Enclosure of (2 (q_{n+1} / q_n) - 1)^(2^n) by repeated squaring."""
    p = t.precision_bits
    x = ratio_factor(t, n)
    for _ in range(n):
        x = (x * x).round(p)
    return x


def power_bound(t: QnTable, n: int) -> Verdict:
    e = exp_minus_1_32(t.precision_bits)
    v = power_value(t, n)
    return _decide(v.hi <= e.lo, v.lo > e.hi)


def verify_power_bound(t: QnTable, n_max: int | None = None,
                       retry: bool = True) -> list[tuple[int, Verdict]]:
    top = t.n_max if n_max is None else min(n_max, t.n_max)

    def check(tab):
        return [(n, power_bound(tab, n)) for n in range(1, top + 1)]

    return _with_retry(check, t) if retry else check(t)


def compute_f_values(n_max: int, p: int = 128) -> list[int]:
    """``f(n) = min{k : e^(-k/32) <= 2^-n}`` for ``n = 1 .. n_max``.

    Both sides of each answer are certified: e^(-k/32) <= 2^-n and
    e^(-(k-1)/32) > 2^-n. The precision is doubled if a comparison is
    ever inconclusive.
    """
    while True:
        try:
            return _f_values(n_max, p)
        except PrecisionExhausted:
            if 2 * p > PRECISION_CAP:
                raise
            p *= 2


def _f_values(n_max, p):
    e = exp_minus_1_32(p)
    power = DyadicInterval(1)
    prev = power
    out = []
    k = 0
    n = 1
    while n <= n_max:
        bound = _pow2(-n)
        if power.hi <= bound:
            if not prev.lo > bound:
                raise PrecisionExhausted(f"f({n}) minimality", power.width_log2())
            out.append(k)
            n += 1
            continue
        if power.lo <= bound:
            raise PrecisionExhausted(f"f({n})", power.width_log2())
        prev = power
        power = (power * e).round(p)
        k += 1
    return out


@lru_cache(maxsize=256)
def compute_f(n: int) -> int:
    if n < 1:
        raise ValueError("f is defined for n >= 1")
    return compute_f_values(n)[-1]


def u_measure(n: int, t: QnTable) -> DyadicInterval:
    """Enclosure of (2 q_1 - 1) * prod_{i<n} (2 q_{i+1}/q_i - 1)^(2^i).

    This is the product formula for the probability of being onto up to
    level ``n``; it needs table entries up to ``q_n``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > t.n_max + 1:
        raise ValueError(f"table covers q up to index {t.n_max + 1}")
    p = t.precision_bits
    u = 2 * t.q(1) - 1
    for i in range(1, n):
        u = (u * power_value(t, i)).round(p)
    _check_width(u, f"u({n})")
    return u


def verify_u_measure(t: QnTable, n_max: int | None = None) -> list[tuple[int, dict[str, Verdict]]]:
    """For each n: u(n) <= e^(-n/32), and u(n+1) <= u(n)."""
    top = t.n_max if n_max is None else min(n_max, t.n_max)
    p = t.precision_bits
    e = exp_minus_1_32(p)
    power = DyadicInterval(1)
    rows = []
    u_next = u_measure(1, t)
    for n in range(1, top + 1):
        u = u_next
        power = (power * e).round(p)
        u_next = u_measure(n + 1, t) if n + 1 <= t.n_max + 1 else None
        row = {"exp_bound": _decide(u.hi <= power.lo, u.lo > power.hi)}
        if u_next is not None:
            row["decreasing"] = _decide(u_next.hi <= u.lo, u_next.lo > u.hi)
        rows.append((n, row))
    return rows


def barycenter_value(sigma_len: int) -> Fraction:
    """Average measure of the preimage of a cylinder of the given length."""
    if sigma_len < 0:
        raise ValueError("length must be non-negative")
    return Fraction(1, 1 << sigma_len)


def s_value(n: int) -> Fraction:
    """``s_{n+1} = 2^-n / 4``, the integral over [0] of the preimage of [0^(n+1)]."""
    return Fraction(1, 1 << n) / 4


def s_equation_holds(n: int) -> bool:
    """Check s = (1/3)(1/2)2^-n + (1/3)*0 + (1/3)(1/2)(2s) in exact rationals.

    The three terms are the label of the first input bit being 0, 1 or 2.
    """
    s = s_value(n)
    third, half = Fraction(1, 3), Fraction(1, 2)
    rhs = third * half * Fraction(1, 1 << n) + third * 0 + third * half * 2 * s
    return rhs == s and 2 * s_value(0) == barycenter_value(1)


def table_rows(t: QnTable) -> list[dict[str, str]]:
    """One row per n with exact decimal endpoints and verdicts."""
    eps_rows = dict(verify_epsilon_bounds(t, retry=False))
    ratio = dict(verify_ratio_bound(t, retry=False))
    power = dict(verify_power_bound(t, retry=False))
    rows = []
    for n in range(1, t.n_max + 1):
        q, e = t.q(n), t.eps(n)
        rows.append({
            "n": str(n),
            "q_lo": q.lo.decimal(), "q_hi": q.hi.decimal(),
            "eps_lo": e.lo.decimal(), "eps_hi": e.hi.decimal(),
            "bound_a": str(eps_rows[n]["a"]), "bound_b": str(eps_rows[n]["b"]),
            "bound_c": str(eps_rows[n]["c"]), "bound_d": str(eps_rows[n]["d"]),
            "ratio_ok": str(ratio[n]), "power_ok": str(power[n]),
        })
    return rows


TABLE_COLUMNS: Sequence[str] = ("n", "q_lo", "q_hi", "eps_lo", "eps_hi", "bound_a",
                                "bound_b", "bound_c", "bound_d", "ratio_ok", "power_ok")
