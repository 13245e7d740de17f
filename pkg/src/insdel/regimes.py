"""Parameter wiring for the high-noise and k-ary regimes, and a whole-code verifier."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConstructionFailure, InvalidInputError, ParameterError
from .highrate import HighRateSpec, design_budget, hr_encode
from .innersearch import CodeTable, as_fraction, floor_frac, search_kary
from .listconcat import ConcatCodeSpec, concat_encode, make_spec, default_gamma
from .seqkit import lcs, lcs_of_code

SEARCH_LIMIT = 1 << 16  # largest inner table attempted


# ---------------------------------------------------------------------------
# slack identities


def highnoise_slack(eps: float) -> float:
    """(1 - eps/4 - 4 ((eps/8)^4)^(1/4)) - (1 - eps); positive on (0, 1/2)."""
    return (1 - eps / 4 - 4 * ((eps / 8) ** 4) ** 0.25) - (1 - eps)


def kary_gamma(eps: float) -> float:
    return 2 * (eps / 5) ** 4


def kary_slack(eps: float, k: int) -> float:
    """Gap between the achieved fraction and 1 - 2/(k+1) - eps."""
    g = kary_gamma(eps)
    return (1 - 2 / (k + 1) - g / 4 - 4 * (g / 2) ** 0.25) - (1 - 2 / (k + 1) - eps)


# ---------------------------------------------------------------------------
# builders


def _inner_for(q: int, m: int, k: int, tau, seed: int) -> CodeTable:
    need = q * q
    if need > SEARCH_LIMIT:
        raise ConstructionFailure(f"inner table needs q^2 = {need} codewords, beyond the search limit "
                                  f"{SEARCH_LIMIT}")
    if k ** m <= 1 << 22 or need <= 256:
        table = search_kary(m, k, tau, max_size=need)
    else:
        table = search_kary(m, k, tau, order="random", max_size=need, seed=seed, stall=50000)
    if len(table) < need:
        raise ConstructionFailure(f"inner search at m={m}, k={k}, target fraction {float(tau):.4f} "
                                  f"found {len(table)} of {need} codewords")
    return table


def highnoise_paper_params(eps, q: int) -> dict:
    eps = as_fraction(eps)
    rate = (eps / 8) ** 4
    return {
        "k": math.ceil(4096 / eps ** 3),
        "m": math.ceil(24 * math.log2(q) / eps),
        "d": floor_frac(rate * q),
        "delta": eps / 4,
        "gamma": eps / 2,
    }


def build_highnoise(eps, q: int, mode: str = "paper", *, k: int | None = None, m: int | None = None,
                    d: int | None = None, gamma=None, seed: int = 0) -> ConcatCodeSpec:
    """Concatenated code decoding a 1 - eps fraction of insertions and deletions.

    The inner code decodes a 1 - eps/4 fraction (``delta = eps/4``). Paper mode
    fixes k, m and the outer rate from eps; explicit mode takes k, m, d and
    gamma directly (gamma defaults to eps/2, the value 4 r^(1/4) at r = (eps/8)^4).
    """
    eps = as_fraction(eps)
    if not 0 < eps < Fraction(1, 2) and mode == "paper":
        raise InvalidInputError(f"paper mode needs 0 < eps < 1/2, got {eps}")
    if not 0 < eps < 1:
        raise InvalidInputError("eps must lie in (0, 1)")
    if mode == "paper":
        p = highnoise_paper_params(eps, q)
        if p["d"] < 1:
            raise ParameterError(f"outer rate (eps/8)^4 gives degree bound 0 at n = q = {q}; "
                                 f"q must be at least {math.ceil((8 / eps) ** 4)}")
        k, m, d, gamma = p["k"], p["m"], p["d"], p["gamma"]
    elif mode == "explicit":
        if k is None or m is None:
            raise InvalidInputError("explicit mode needs k and m")
        d = 1 if d is None else d
        gamma = eps / 2 if gamma is None else as_fraction(gamma)
    else:
        raise InvalidInputError(f"unknown mode {mode!r}")
    table = _inner_for(q, m, k, 1 - eps / 4, seed)
    return make_spec(q, d, table, eps / 4, gamma)


def build_kary(k: int, eps, q: int, mode: str = "paper", *, m: int | None = None, d: int | None = None,
               margin=None, gamma=None, seed: int = 0) -> ConcatCodeSpec:
    """Concatenated k-ary code approaching a 1 - 2/(k+1) decodable fraction.

    The inner code targets ``1 - 2/(k+1) - margin`` where paper mode uses
    ``margin = gamma_k / 4`` with ``gamma_k = 2 (eps/5)^4`` and outer rate
    ``gamma_k / 2``.
    """
    eps = as_fraction(eps)
    if k < 2 or eps <= 0:
        raise InvalidInputError("need k >= 2 and eps > 0")
    if Fraction(2, k + 1) + eps >= 1:
        raise InvalidInputError("2/(k+1) + eps >= 1 leaves no decodable fraction")
    if mode == "paper":
        gk = 2 * (eps / 5) ** 4
        margin = gk / 4
        d = floor_frac(gk / 2 * q)
        if d < 1:
            raise ParameterError(f"outer rate gamma/2 gives degree bound 0 at n = q = {q}")
        gamma = Fraction(default_gamma(Fraction(d, q))).limit_denominator(10**6)
        if m is None:
            raise ConstructionFailure("paper mode leaves the inner length unspecified; "
                                      "no searchable length meets the target")
    elif mode == "explicit":
        if m is None or margin is None:
            raise InvalidInputError("explicit mode needs m and margin")
        margin = as_fraction(margin)
        d = 1 if d is None else d
        gamma = eps / 2 if gamma is None else as_fraction(gamma)
    else:
        raise InvalidInputError(f"unknown mode {mode!r}")
    tau = 1 - Fraction(2, k + 1) - margin
    if tau <= 0:
        raise InvalidInputError("inner target fraction is not positive")
    try:
        table = _inner_for(q, m, k, tau, seed)
    except ConstructionFailure as exc:
        best = best_fraction(q, m, k, seed)
        raise ConstructionFailure(f"{exc}; largest achievable fraction at m={m}: {best}") from None
    return make_spec(q, d, table, 1 - tau, gamma)


def best_fraction(q: int, m: int, k: int, seed: int = 0) -> Fraction | None:
    """Largest r/m such that a q^2-word table with radius >= r was found."""
    for r in range(m - 1, -1, -1):
        try:
            _inner_for(q, m, k, Fraction(r, m), seed)
            return Fraction(r, m)
        except ConstructionFailure:
            continue
    return None


# ---------------------------------------------------------------------------
# verification


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class RegimeReport:
    regime: str
    rate: float
    decodable_fraction: float
    params: dict
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def dumps(self) -> str:
        lines = [f"regime={self.regime}", f"rate={self.rate:.6g}",
                 f"decodable_fraction={self.decodable_fraction:.6g}"]
        lines += [f"param.{k}={v}" for k, v in self.params.items()]
        lines += [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}" for c in self.checks]
        return "\n".join(lines) + "\n"


def concatenate(outer_word: Sequence[int], inner: Sequence[Sequence[int]], pad: Sequence[int] = ()) -> tuple:
    out: list[int] = []
    for i, x in enumerate(outer_word):
        if i and pad:
            out.extend(pad)
        out.extend(inner[x])
    return tuple(out)


def lcs_bound_violations(outer: Sequence[Sequence[int]], inner: Sequence[Sequence[int]]) -> list[tuple]:
    """Pairs of the concatenated code whose LCS exceeds (Delta + 2 delta) n m.

    ``Delta`` and ``delta`` are the normalised LCS of the outer and inner codes;
    the check is exhaustive over codeword pairs.
    """
    n, m = len(outer[0]), len(inner[0])
    Delta = Fraction(lcs_of_code(outer), n)
    delta = Fraction(lcs_of_code(inner), m)
    bound = (Delta + 2 * delta) * n * m
    words = [concatenate(x, inner) for x in outer]
    bad = []
    for a, b in itertools.combinations(range(len(outer)), 2):
        value = lcs(words[a], words[b])
        if value > bound:
            bad.append((outer[a], outer[b], value, bound))
    return bad


def _message_pairs(space: int, d: int, effort: int, seed: int):
    """Distinct message pairs: all of them when there are few, else a seeded sample."""
    total = space ** d
    if total * (total - 1) // 2 <= effort:
        msgs = list(itertools.product(range(space), repeat=d))
        return list(itertools.combinations(msgs, 2))
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < effort:
        a = tuple(rng.integers(0, space, d).tolist())
        b = tuple(rng.integers(0, space, d).tolist())
        if a != b:
            out.append((a, b))
    return out


def verify_code(spec, effort: int = 20, seed: int = 0) -> RegimeReport:
    """Re-check a built code against its inner radius and the structural invariants.

    Failed checks are recorded in the report, never raised.
    """
    table = spec.inner
    report_checks = []
    actual = table.compute_radius()
    report_checks.append(Check("inner_radius", actual == table.verified_radius,
                               f"claimed {table.verified_radius}, recomputed {actual}"))
    lcs_in = table.m - actual - 1
    if isinstance(spec, HighRateSpec):
        n, m, B, d = spec.n, spec.m, spec.buffer_len, spec.d
        space, encode, N, k = spec.symbol_space, (lambda msg: hr_encode(spec, msg)), spec.length, 2
        # appending 0^B to every block gives an inner code with LCS <= LCS_in + B
        delta_in = Fraction(lcs_in + B, m + B)
        scale = n * (m + B)
        regime = "highrate"
        try:
            claimed = design_budget(spec) / N
        except ParameterError:
            claimed = 0.0
    else:
        n, m, d = spec.n, spec.m, spec.outer.d
        space, encode, N, k = spec.q, (lambda msg: concat_encode(spec, msg)), spec.length, spec.k
        delta_in = Fraction(lcs_in, m)
        scale = n * m
        regime = "concat"
        claimed = float(1 - spec.delta - spec.gamma)
    # outer symbols carry their position, so two outer words share exactly their agreements
    worst = 0.0
    violations = 0
    pairs = _message_pairs(space, d, effort, seed)
    for a, b in pairs:
        x, y = encode(a), encode(b)
        agree = sum(u == v for u, v in zip(_outer_values(spec, a), _outer_values(spec, b)))
        bound = (Fraction(agree, n) + 2 * delta_in) * scale
        value = lcs(x, y)
        worst = max(worst, value / float(bound) if bound else (math.inf if value else 0.0))
        violations += value > bound
    report_checks.append(Check("lcs_bound", violations == 0,
                               f"{len(pairs)} pairs, {violations} above bound, worst ratio {worst:.3f}"))
    lcs_bound = (Fraction(max(d - 1, 0), n) + 2 * delta_in) * scale
    combinatorial = 1 - float(lcs_bound + 1) / N
    problems = spec.check()
    report_checks.append(Check("invariants", not problems, "; ".join(problems) or "all hold"))
    if isinstance(spec, HighRateSpec):
        try:
            budget = design_budget(spec)
            report_checks.append(Check("design_budget", budget >= 0,
                                       f"{budget} edits (2E+S <= 5t < n-d+1 = {n - d + 1})"))
        except ParameterError as exc:
            report_checks.append(Check("design_budget", False, str(exc)))
    else:
        report_checks.append(Check("decoder_radius_within_combinatorial", claimed <= combinatorial,
                                   f"decoder fraction {claimed:.4f}, LCS-certified {combinatorial:.4f}"))
    rate = d * math.log(space) / (N * math.log(k))
    params = {"n": n, "m": m, "d": d, "N": N, "k": k, "lcs_certified_fraction": f"{combinatorial:.6g}"}
    if isinstance(spec, HighRateSpec):
        params.update(q=spec.q, h=spec.h, delta=spec.delta, B=spec.buffer_len, theta_buf=spec.theta_buf)
    else:
        params.update(q=spec.q, delta=spec.delta, gamma=spec.gamma)
    return RegimeReport(regime, rate, claimed, params, report_checks)


def _outer_values(spec, message) -> list[int]:
    from .rs import rs_encode

    return rs_encode(spec.outer, message)
