"""Seeded Monte Carlo experiments with confidence intervals.

Trial ``i`` of an experiment reads only streams keyed by
``(master_seed, stream_id=i)``, with one lane per role (function labels,
auxiliary coins, selector bits). Trials therefore do not depend on how
they are scheduled, and per-trial statistics are integers so aggregation
is exact: an experiment gives bit-identical records for any worker count.

Each catalog entry names a sampler, a statistic (a proportion, a mean, or
a lower/upper bracket of either) and an optional reference interval.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Callable, Optional

from . import kernels
from .closed_sets import decode_tree3, decode_tree4, select_path, tree_code_containing
from .codings import CodeWord, DigitStream, words_of_length
from .errors import (DeadEnd, ExperimentAborted, NeedMoreBits, NeedMoreCode,
                     UndeterminedError)
from .exact_qn import q_table, u_measure
from .rand_functions import (FunctionCode, StreamFunction, evaluate, gw_code,
                             hit_bracket, induced_gw_code, level_hits,
                             preimage_mass, sample_function_with_zeros,
                             zeros_tree)
from .rand_measures import (Status, classify_third, random_measure_code,
                            support_matches_tree, third_support_digits,
                            third_support_tree)

LANE_FUNCTION = 0
LANE_AUX = 1
LANE_AUX2 = 2

FAILURE_BUDGET = Fraction(1, 1000)
TRIAL_ERRORS = (NeedMoreCode, NeedMoreBits, UndeterminedError, DeadEnd)
REFERENCE_PRECISION = 256

WITHIN = "WithinCI"
BRACKETED = "Bracketed"
OUTSIDE = "OutsideCI"


def wilson_ci(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("wilson_ci needs at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    n = trials
    phat = successes / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == n else min(1.0, centre + half)
    return lo, hi


def mean_ci(total: int, total_sq: int, n: int, scale: int,
            confidence: float) -> tuple[float, tuple[float, float]]:
    """Normal-approximation CI for the mean of ``x / scale`` from integer sums."""
    mean = Fraction(total, n * scale)
    if n < 2:
        return float(mean), (float(mean), float(mean))
    var = (Fraction(total_sq, n) - Fraction(total, n) ** 2) * Fraction(n, n - 1) / (scale * scale)
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    half = z * math.sqrt(float(var) / n)
    m = float(mean)
    return m, (m - half, m + half)


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    trials: int = 10_000
    depth: Optional[int] = None
    params: dict = field(default_factory=dict)
    master_seed: int = 0
    confidence: float = 0.99


@dataclass
class EstimateRecord:
    name: str
    params: dict
    trials: int
    depth: int
    seed: int
    estimate: float
    ci: tuple[float, float]
    reference: Optional[tuple[float, float]]
    verdict: str
    failures: int
    successes: Optional[int] = None
    bracket: Optional[dict] = None
    details: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "params": self.params, "trials": self.trials,
               "depth": self.depth, "seed": self.seed, "estimate": self.estimate,
               "ci": list(self.ci),
               "reference": None if self.reference is None else list(self.reference),
               "verdict": self.verdict, "failures": self.failures}
        if self.successes is not None:
            out["successes"] = self.successes
        if self.bracket is not None:
            out["bracket"] = self.bracket
        if self.details is not None:
            out["details"] = self.details
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verdict_for(cis: list[tuple[float, float]], reference) -> str:
    """WithinCI: a point reference lies in every CI. Bracketed: the reference
    overlaps every CI, or at least the envelope of all of them."""
    lo, hi = reference
    overlaps = [c[0] <= hi and lo <= c[1] for c in cis]
    if lo == hi and all(overlaps):
        return WITHIN
    if all(overlaps):
        return BRACKETED
    env = (min(c[0] for c in cis), max(c[1] for c in cis))
    if env[0] <= hi and lo <= env[1]:
        return BRACKETED
    return OUTSIDE


# -- streams ---------------------------------------------------------------

def _function(seed, i, depth):
    return StreamFunction(DigitStream(seed, i, 3, LANE_FUNCTION), depth)


def _aux(seed, i, alphabet, lane=LANE_AUX):
    return DigitStream(seed, i, alphabet, lane)


def _decode_stream4(seed, i, depth):
    """decode_tree4 of a μ_GW code drawn from trial ``i``, growing the code
    until it is long enough."""
    stream = _aux(seed, i, 3)
    length = 64
    while True:
        try:
            return decode_tree4(gw_code(stream, length), depth).tree
        except NeedMoreCode as exc:
            length = max(2 * length, exc.required_count)


def _q_interval(n):
    if n == 0:
        return (1.0, 1.0)
    iv = q_table(max(n, 1), REFERENCE_PRECISION).q(n)
    return _float_down(iv.lo), _float_up(iv.hi)


def _float_up(x) -> float:
    """A float not below the dyadic ``x``."""
    f = float(x)
    return f if Fraction(f) >= x.as_fraction() else math.nextafter(f, math.inf)


def _float_down(x) -> float:
    f = float(x)
    return f if Fraction(f) <= x.as_fraction() else math.nextafter(f, -math.inf)


def _u_interval(n):
    t = q_table(max(n, 1), REFERENCE_PRECISION)
    return u_measure(n, t)


# -- trials ----------------------------------------------------------------
# Each trial function returns a tuple of integers.

def _t_hit(seed, i, depth, params):
    w, p = hit_bracket(_function(seed, i, depth), params["target"], depth)
    return int(w), int(p)


def _t_cover(seed, i, depth, params):
    w, p = level_hits(_function(seed, i, depth), params["n"], depth)
    return sum(w), sum(p)


def _t_range_positive(seed, i, depth, params):
    w, _ = level_hits(_function(seed, i, depth), params["n"], depth)
    return (int(any(w)),)


def _t_empty(seed, i, depth, params):
    _, p = level_hits(_function(seed, i, depth), params["n"], depth)
    return (int(not all(p)),)


def _t_onto(seed, i, depth, params):
    w, p = level_hits(_function(seed, i, depth), params["n"], depth)
    return int(all(w)), int(all(p))


def _t_barycenter(seed, i, depth, params):
    lo, hi = preimage_mass(_function(seed, i, depth), params["target"], depth)
    scale = 1 << depth
    return int(lo * scale), int(hi * scale)


def _t_zeros(seed, i, depth, params):
    code = induced_gw_code(_function(seed, i, depth), depth)
    counts = [0, 0, 0, 0]
    for d in code:
        counts[d] += 1
    return tuple(counts)


def _t_support(seed, i, depth, params):
    x = _aux(seed, i, 3).word((1 << depth) - 1)
    equal, undetermined = support_matches_tree(x, depth)
    return int(equal and undetermined == 0), undetermined


def _t_third(seed, i, depth, params):
    m = random_measure_code(_aux(seed, i, 2))
    k = params["k_bits"]
    counts = [0, 0, 0, 0]  # digit 0, 1, 2, undetermined
    level = [0]
    for _ in range(params["levels"]):
        nxt = []
        for node in level:
            d, _ = classify_third(m.column(node), k)
            if d is None:
                counts[3] += 1
                continue
            counts[d] += 1
            if d in (0, 2):
                nxt.append(2 * node + 1)
            if d in (1, 2):
                nxt.append(2 * node + 2)
        level = nxt
    return tuple(counts)


def _t_gw_alive(seed, i, depth, params):
    tree = _decode_stream4(seed, i, depth)
    return (int(bool(tree.level(depth))),)


def _t_gw_size(seed, i, depth, params):
    tree = _decode_stream4(seed, i, depth)
    return (len(tree.level(depth)),)


def _t_closed_cover(seed, i, depth, params):
    tree = decode_tree3(_aux(seed, i, 3), depth).tree
    return (len(tree.level(depth)),)


def _t_composition(seed, i, depth, params):
    f = _function(seed, i, depth)
    r = evaluate(f, "0" * depth).output
    k = len(r)
    code = tree_code_containing(r, _aux(seed, i, 3), k)
    c = decode_tree3(code, k).tree
    g = sample_function_with_zeros(c, _aux(seed, i, 3, LANE_AUX2), k)
    out = evaluate(g, r).output
    return (int(all(b == 0 for b in out)),)


def _t_coin(seed, i, depth, params):
    return (_aux(seed, i, 2).digit(0),)


# -- exact experiments -----------------------------------------------------

def _weighted_codes(alphabet_weights, length):
    for digits in itertools.product(range(len(alphabet_weights)), repeat=length):
        w = Fraction(1)
        for d in digits:
            w *= alphabet_weights[d]
        yield digits, w


GW_LAW = (Fraction(2, 9), Fraction(2, 9), Fraction(4, 9), Fraction(1, 9))


def gw_tree_distribution(depth: int) -> dict[frozenset, Fraction]:
    """Exact law of decode_tree4 at ``depth`` under i.i.d. μ_GW digits."""
    dist: dict[frozenset, Fraction] = {}
    for digits, w in _weighted_codes(GW_LAW, (1 << depth) - 1):
        tree = decode_tree4(CodeWord(4, digits), depth).tree
        dist[tree.members] = dist.get(tree.members, 0) + w
    return dist


def zeros_tree_distribution(depth: int) -> dict[frozenset, Fraction]:
    """Exact law of zeros_tree over all uniform labelings up to ``depth``."""
    n = (1 << (depth + 1)) - 2
    weight = Fraction(1, 3 ** n)
    dist: dict[frozenset, Fraction] = {}
    for labels in itertools.product(range(3), repeat=n):
        tree = zeros_tree(FunctionCode(CodeWord(3, labels), depth), depth)
        dist[tree.members] = dist.get(tree.members, 0) + weight
    return dist


def gw_digit_distribution() -> list[Fraction]:
    """Law of the induced digit over the 9 uniform child-label pairs."""
    from .rand_functions import gw_digit
    counts = [Fraction(0)] * 4
    for a in range(3):
        for b in range(3):
            counts[gw_digit(a, b)] += Fraction(1, 9)
    return counts


def path_distribution(depth: int) -> dict[str, Fraction]:
    """Exact law of the selected path prefix for a uniform 3-ary tree code
    and uniform selector bits."""
    n_code = (1 << depth) - 1
    weight = Fraction(1, 3 ** n_code * 2 ** depth)
    dist = {w: Fraction(0) for w in words_of_length(depth)}
    selectors = words_of_length(depth)
    for digits in itertools.product(range(3), repeat=n_code):
        tree = decode_tree3(CodeWord(3, digits), depth).tree
        for sel in selectors:
            dist[str(select_path(tree, sel, depth))] += weight
    return dist


def _tv(p: dict, q: dict) -> Fraction:
    keys = set(p) | set(q)
    return sum((abs(p.get(k, 0) - q.get(k, 0)) for k in keys), Fraction(0)) / 2


def _exact_record(spec, depth, params, distance, details):
    verdict = WITHIN if distance == 0 else OUTSIDE
    d = float(distance)
    return EstimateRecord(spec.name, params, 0, depth, spec.master_seed, d, (d, d),
                          (0.0, 0.0), verdict, 0, details=details)


def _x_path(spec, depth, params):
    if depth > 4:
        raise ValueError("exhaustive path enumeration supports depth <= 4")
    dist = path_distribution(depth)
    uniform = {w: Fraction(1, 1 << depth) for w in dist}
    return _exact_record(spec, depth, params, _tv(dist, uniform),
                         {"distribution": {w: str(v) for w, v in sorted(dist.items())}})


def _x_zeros(spec, depth, params):
    if depth > 2:
        raise ValueError("exhaustive zeros enumeration supports depth <= 2")
    got = zeros_tree_distribution(depth)
    want = gw_tree_distribution(depth)
    digit_law = gw_digit_distribution()
    distance = _tv(got, want) + sum(abs(a - b) for a, b in zip(digit_law, GW_LAW))
    trees = sorted(([sorted(t, key=lambda w: (len(w), w)), str(v)]
                    for t, v in got.items()), key=lambda tv: (len(tv[0]), tv[0]))
    return _exact_record(spec, depth, params, distance,
                         {"digit_law": [str(v) for v in digit_law], "trees": trees})


# -- catalog ---------------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    name: str
    trial: Optional[Callable]
    defaults: dict
    default_depth: int
    kind: str  # "proportion", "bracket", "mean", "mean_bracket", "counts", "exact"
    reference: Optional[Callable] = None  # (depth, params) -> (lo, hi) or None
    scale: Optional[Callable] = None  # (depth, params) -> int, for means
    exact: Optional[Callable] = None
    max_depth: int = kernels.MAX_DEPTH
    counts_law: Optional[tuple] = None
    description: str = ""


def _ref_hit(depth, params):
    return _q_interval(len(params["target"]))


def _ref_fixed_y(depth, params):
    return 0.75, _q_interval(params["n"])[1]


def _ref_cover(depth, params):
    return _q_interval(params["n"])


def _ref_onto(depth, params):
    return 0.0, _float_up(_u_interval(params["n"]).hi)


def _ref_empty(depth, params):
    return 1 - _float_up(_u_interval(params["n"]).hi), 1.0


def _ref_point(value):
    return lambda depth, params: (float(value), float(value))


def _ref_barycenter(depth, params):
    v = 2.0 ** -len(params["target"])
    return v, v


def gw_survival(depth: int) -> Fraction:
    """Exact P(level ``depth`` is non-empty) for the μ_GW branching law.

    Extinction by generation d obeys e_d = g(e_{d-1}), e_0 = 0, with offspring
    generating function g(s) = 1/9 + 4/9 s + 4/9 s^2.
    """
    e = Fraction(0)
    for _ in range(depth):
        e = GW_LAW[3] + (GW_LAW[0] + GW_LAW[1]) * e + GW_LAW[2] * e * e
    return 1 - e


def _ref_survival(depth, params):
    v = float(gw_survival(depth))
    return v, v


def _ref_gw_size(depth, params):
    v = float(Fraction(4, 3) ** depth)
    return v, v


def _ref_closed_cover(depth, params):
    v = float(Fraction(2, 3) ** depth)
    return v, v


CATALOG: dict[str, Experiment] = {e.name: e for e in [
    Experiment("hit_prob", _t_hit, {"target": "0"}, 40, "bracket", _ref_hit,
               description="witnessed/possible hit of [target]; reference q_|target|"),
    Experiment("hit_prob_fixed_y", _t_hit, {"y": "", "n": 10}, 40, "bracket", _ref_fixed_y,
               description="hit of [y|n] (y defaults to zeros); reference [3/4, q_n]"),
    Experiment("cover_mean", _t_cover, {"n": 4}, 40, "mean_bracket", _ref_cover,
               lambda d, p: 1 << p["n"],
               description="mean fraction of level-n cylinders hit; reference q_n"),
    Experiment("range_positive", _t_range_positive, {"n": 4}, 40, "proportion",
               _ref_point(1), description="some level-n cylinder is witnessed hit"),
    Experiment("empty_cylinder", _t_empty, {"n": 8}, 40, "proportion", _ref_empty,
               description="some level-n cylinder certainly has empty preimage"),
    Experiment("onto_level", _t_onto, {"n": 2}, 40, "bracket", _ref_onto,
               description="onto up to level n; reference [0, u(n)]"),
    Experiment("zeros_pushforward", _t_zeros, {"mode": "sampled"}, 8, "counts",
               counts_law=GW_LAW, exact=_x_zeros,
               description="induced 4-ary digit law vs (2/9, 2/9, 4/9, 1/9)"),
    Experiment("support_equality", _t_support, {}, 12, "proportion", _ref_point(1),
               max_depth=16,
               description="support of the coded measure equals the coded tree"),
    Experiment("third_pushforward", _t_third, {"k_bits": 32, "levels": 8}, 0, "counts",
               counts_law=(Fraction(1, 3),) * 3,
               description="1/3-support digit law vs (1/3, 1/3, 1/3)"),
    Experiment("barycenter", _t_barycenter, {"target": "0"}, 40, "mean_bracket",
               _ref_barycenter, lambda d, p: 1 << d,
               description="mean preimage measure of [target]; reference 2^-|target|"),
    Experiment("gw_extinction", _t_gw_alive, {}, 12, "proportion", _ref_survival,
               max_depth=40, description="GW tree alive at depth; exact survival"),
    Experiment("gw_level_size", _t_gw_size, {}, 8, "mean", _ref_gw_size,
               lambda d, p: 1, max_depth=20,
               description="mean GW level size; reference (4/3)^depth"),
    Experiment("closed_set_cover", _t_closed_cover, {}, 8, "mean", _ref_closed_cover,
               lambda d, p: 1 << d, max_depth=20,
               description="mean cover measure of a random closed set; (2/3)^depth"),
    Experiment("composition_demo", _t_composition, {}, 12, "proportion", _ref_point(1),
               max_depth=16,
               description="G built around the output of F sends it into [0^k]"),
    Experiment("path_pushforward", None, {"mode": "exhaustive"}, 3, "exact",
               exact=_x_path, max_depth=4,
               description="selected path prefix is exactly uniform"),
    Experiment("coin", _t_coin, {}, 0, "proportion", _ref_point(Fraction(1, 2)),
               description="Bernoulli(1/2) calibration"),
]}


def _normalize_params(exp: Experiment, params: dict, depth: int) -> dict:
    unknown = set(params) - set(exp.defaults)
    if unknown:
        raise ValueError(f"{exp.name}: unknown parameters {sorted(unknown)}")
    out = dict(exp.defaults)
    for k, v in params.items():
        default = exp.defaults[k]
        out[k] = type(default)(v) if v is not None else default
    for key in ("target", "y"):
        if key in out:
            if out[key].strip("01"):
                raise ValueError(f"{key} must be a binary word")
    if exp.name == "hit_prob_fixed_y":
        n = out["n"]
        y = out["y"] or "0" * n
        if len(y) < n:
            raise ValueError("y must have at least n bits")
        out["target"] = y[:n]
    if "n" in out and not 0 <= out["n"] <= 20:
        raise ValueError("n must lie in [0, 20]")
    if exp.name == "zeros_pushforward" and out["mode"] not in ("sampled", "exhaustive"):
        raise ValueError("mode must be 'sampled' or 'exhaustive'")
    if exp.name == "third_pushforward" and not (1 <= out["k_bits"] and 0 <= out["levels"] <= 20):
        raise ValueError("k_bits must be positive and levels in [0, 20]")
    return out


def _run_chunk(name, seed, depth, params, start, stop):
    trial = CATALOG[name].trial
    out = []
    for i in range(start, stop):
        try:
            out.append(trial(seed, i, depth, params))
        except TRIAL_ERRORS:
            out.append(None)
    return out


def _chunks(trials, workers):
    size = max(1, -(-trials // (workers * 8)))
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> EstimateRecord:
    exp = CATALOG.get(spec.name)
    if exp is None:
        raise ValueError(f"unknown experiment {spec.name!r}; "
                         f"choose from {sorted(CATALOG)}")
    depth = exp.default_depth if spec.depth is None else spec.depth
    if not 0 <= depth <= exp.max_depth:
        raise ValueError(f"{exp.name}: depth must lie in [0, {exp.max_depth}]")
    if not 0 <= spec.master_seed < 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if not 0 < spec.confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    params = _normalize_params(exp, spec.params, depth)
    if "target" in params and len(params["target"]) > depth and exp.kind != "exact":
        raise ValueError("target longer than depth can never be hit")
    if exp.kind == "exact" or params.get("mode") == "exhaustive":
        return exp.exact(spec, depth, params)
    if spec.trials < 1:
        raise ValueError("trials must be positive")

    if workers <= 1:
        results = _run_chunk(exp.name, spec.master_seed, depth, params, 0, spec.trials)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, exp.name, spec.master_seed, depth,
                                   params, a, b) for a, b in _chunks(spec.trials, workers)]
            results = [r for fut in futures for r in fut.result()]

    failures = sum(r is None for r in results)
    if failures > FAILURE_BUDGET * spec.trials:
        raise ExperimentAborted(exp.name, failures, spec.trials)
    good = [r for r in results if r is not None]
    return _summarize(exp, spec, depth, params, good, failures)


def _summarize(exp, spec, depth, params, good, failures):
    n = len(good)
    conf = spec.confidence
    ref = exp.reference(depth, params) if exp.reference else None
    base = dict(name=exp.name, params=params, trials=spec.trials, depth=depth,
                seed=spec.master_seed, failures=failures)

    if exp.kind in ("proportion", "bracket"):
        succ = [sum(r[j] for r in good) for j in range(2 if exp.kind == "bracket" else 1)]
        cis = [wilson_ci(s, n, conf) for s in succ]
        ests = [s / n for s in succ]
        bracket = None
        if exp.kind == "bracket":
            bracket = {"lower": {"estimate": ests[0], "ci": list(cis[0]), "successes": succ[0]},
                       "upper": {"estimate": ests[1], "ci": list(cis[1]), "successes": succ[1]}}
        ci = (cis[0][0], cis[-1][1])
        verdict = verdict_for(cis, ref) if ref else WITHIN
        return EstimateRecord(**base, estimate=ests[0], ci=ci, reference=ref,
                              verdict=verdict, successes=succ[0], bracket=bracket)

    if exp.kind in ("mean", "mean_bracket"):
        scale = exp.scale(depth, params)
        k = 2 if exp.kind == "mean_bracket" else 1
        stats = []
        for j in range(k):
            s1 = sum(r[j] for r in good)
            s2 = sum(r[j] * r[j] for r in good)
            stats.append(mean_ci(s1, s2, n, scale, conf))
        cis = [c for _, c in stats]
        bracket = None
        if k == 2:
            bracket = {"lower": {"estimate": stats[0][0], "ci": list(cis[0])},
                       "upper": {"estimate": stats[1][0], "ci": list(cis[1])}}
        ci = (cis[0][0], cis[-1][1])
        verdict = verdict_for(cis, ref) if ref else WITHIN
        return EstimateRecord(**base, estimate=stats[0][0], ci=ci, reference=ref,
                              verdict=verdict, bracket=bracket)

    # counts: categorical frequencies against an exact law
    law = exp.counts_law
    totals = [sum(r[j] for r in good) for j in range(len(law))]
    all_digits = sum(totals)
    if all_digits == 0:
        raise ExperimentAborted(exp.name, failures, spec.trials)
    per_digit = []
    verdict = WITHIN
    for d, (c, p) in enumerate(zip(totals, law)):
        lo, hi = wilson_ci(c, all_digits, conf)
        ok = lo <= p <= hi
        verdict = verdict if ok else OUTSIDE
        per_digit.append({"digit": d, "count": c, "frequency": c / all_digits,
                          "ci": [lo, hi], "expected": str(p)})
    details = {"digits": all_digits, "per_digit": per_digit}
    if len(good[0]) > len(law):
        details["undetermined"] = sum(r[len(law)] for r in good)
    # the headline number is the frequency of the branching digit 2
    head = per_digit[2]
    p2 = float(law[2])
    return EstimateRecord(**base, estimate=head["frequency"], ci=tuple(head["ci"]),
                          reference=(p2, p2), verdict=verdict, successes=head["count"],
                          details=details)


def default_workers() -> int:
    return max(1, min(4, os.cpu_count() or 1))


# -- exact checks over many seeds ------------------------------------------

def check_support_equality(seeds: int, depth: int, master_seed: int = 0) -> dict:
    equal = undetermined = 0
    for i in range(seeds):
        eq, und = support_matches_tree(_aux(master_seed, i, 3).word((1 << depth) - 1), depth)
        equal += eq
        undetermined += und
    return {"check": "support", "seeds": seeds, "depth": depth, "equal": equal,
            "undetermined": undetermined, "ok": equal == seeds and undetermined == 0}


def check_third_support(seeds: int, depth: int, master_seed: int = 0,
                        k_bits: int = 32) -> dict:
    """Round trip: decoding the emitted digits gives the 1/3-support tree."""
    equal = undetermined = 0
    for i in range(seeds):
        m = random_measure_code(_aux(master_seed, i, 2))
        tree = third_support_tree(m, depth, k_bits)
        und = tree.undetermined()
        if und:
            undetermined += len(und)
            continue
        digits = third_support_digits(m, depth, k_bits)
        equal += decode_tree3(digits, depth).tree == tree.members()
    return {"check": "third-support", "seeds": seeds, "depth": depth, "k_bits": k_bits,
            "equal": equal, "undetermined": undetermined,
            "ok": equal == seeds and undetermined == 0}


def check_zeros_pushforward(seeds: int, depth: int, master_seed: int = 0) -> dict:
    """Exact law at depth <= 2, plus per-seed identities at ``depth``:
    decode_tree4(induced_gw_code(f)) = zeros_tree(f), and the inverse
    sampler reproduces a given μ_GW tree and its code."""
    exact_depth = min(depth, 2)
    want = gw_tree_distribution(exact_depth)
    got = zeros_tree_distribution(exact_depth)
    digit_ok = gw_digit_distribution() == list(GW_LAW)
    forward = inverse = 0
    for i in range(seeds):
        f = _function(master_seed, i, depth)
        code = induced_gw_code(f, depth)
        forward += decode_tree4(code, depth).tree == zeros_tree(f, depth)
        tree = _decode_stream4(master_seed, i, depth)
        g = sample_function_with_zeros(tree, _aux(master_seed, i, 3, LANE_AUX2), depth)
        inverse += zeros_tree(g, depth) == tree
    return {"check": "zeros-pushforward", "seeds": seeds, "depth": depth,
            "exact_depth": exact_depth, "exact_law": got == want, "digit_law": digit_ok,
            "forward": forward, "inverse": inverse,
            "ok": got == want and digit_ok and forward == seeds and inverse == seeds}


def check_path_pushforward(depth: int) -> dict:
    dist = path_distribution(depth)
    values = set(dist.values())
    uniform = values == {Fraction(1, 1 << depth)}
    summary = (f"exact: uniform 1/{1 << depth} \u00d7 {len(dist)}" if uniform
               else "not uniform")
    return {"check": "path-pushforward", "depth": depth, "ok": uniform,
            "summary": summary,
            "distribution": {w: str(v) for w, v in sorted(dist.items())}}
