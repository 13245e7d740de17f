"""High-rate binary insdel code: index-annotated RS outer code, dense inner code, zero buffers.

Codeword layout for outer codeword ``(c_0, ..., c_{n-1})`` over GF(q^h)::

    Enc_in(0, c_0) 0^B Enc_in(1, c_1) 0^B ... 0^B Enc_in(n-1, c_{n-1})

The pair ``(i, c_i)`` is packed into the inner index ``i * q^h + c_i``, so the
inner table holds exactly ``q^(h+1)`` binary words. Decoding finds low-weight
windows of length ``B`` (buffers), inner-decodes the gaps between them, erases
outer positions that were claimed with conflicting values, and finishes with
errors-and-erasures RS decoding.

Design budget
-------------
With a buffer threshold of zero ones (``floor(theta_buf * B) == 0``) and inner
words that start and end with 1 and contain no ``B`` zeros in a row, the
buffers are exactly the leading ``B``-blocks of the zero runs of length at
least ``B``. A block whose word and both neighbouring chunks are untouched
produces the window ``0^L w_i`` with ``L < B``, which inner-decodes correctly
whenever the inner radius is at least ``floor(delta m) >= B - 1``. Each edit
dirties at most two blocks and changes the number of long zero runs by at
most one, so ``t`` edits cost the RS decoder at most ``2E + S <= 5t``. The
design budget is therefore ``floor((n - d) / 5)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConstructionFailure, DecodeFailure, InvalidInputError, ParameterError
from .gf import FieldSpec, Poly, poly_eval_many, poly_trim
from .innersearch import (
    CodeTable,
    as_fraction,
    ceil_frac,
    density_ok,
    floor_frac,
    search_dense_binary,
)
from .rs import RSCodeSpec, rs_decode_ee, rs_encode
from .seqkit import SymbolString, _symbols, alignment, insdel_distance

EPS0 = Fraction(1, 121 ** 2)
DEFAULT_THETA_BUF = Fraction(1, 160)
GOOD_FRACTION = Fraction(3, 4)


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise InvalidInputError(f"field order {q} must be >= 2")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise InvalidInputError(f"{q} is not a prime power")
    return p, e


@dataclass(frozen=True)
class HighRateSpec:
    """Every parameter of a high-rate construction, plus its inner table."""

    q: int
    h: int
    d: int
    delta: Fraction
    inner: CodeTable
    theta_buf: Fraction = DEFAULT_THETA_BUF
    eps: Fraction | None = None
    mode: str = "explicit"
    outer: RSCodeSpec = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        object.__setattr__(self, "theta_buf", as_fraction(self.theta_buf))
        if self.eps is not None:
            object.__setattr__(self, "eps", as_fraction(self.eps))
        p, e = _prime_power(self.q)
        if self.h < 1:
            raise InvalidInputError("packing factor h must be >= 1")
        object.__setattr__(self, "outer", RSCodeSpec(FieldSpec(p, e * self.h), self.d, self.q))

    # sizes -----------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.q

    @property
    def m(self) -> int:
        return self.inner.m

    @property
    def symbol_space(self) -> int:
        """Order of the outer alphabet, q^h."""
        return self.q ** self.h

    @property
    def buffer_len(self) -> int:
        return ceil_frac(self.delta * self.m)

    @property
    def detect_ones(self) -> int:
        """A length-B window is a buffer when it holds at most this many ones."""
        return floor_frac(self.theta_buf * self.buffer_len)

    @property
    def inner_distance(self) -> int:
        return floor_frac(self.delta * self.m)

    @property
    def length(self) -> int:
        return self.n * self.m + (self.n - 1) * self.buffer_len

    @property
    def nominal_length(self) -> Fraction:
        return self.n * self.m * (1 + self.delta)

    # rates -----------------------------------------------------------------
    @property
    def message_bits(self) -> float:
        return self.d * self.h * math.log2(self.q)

    @property
    def rate(self) -> float:
        """log2|C| / N for the actual block length."""
        return self.message_bits / self.length

    def rate_factors(self) -> dict[str, float]:
        inner_rate = math.log2(self.q ** (self.h + 1)) / self.m
        return {
            "outer": self.d / self.n,
            "packing": self.h / (self.h + 1),
            "inner": inner_rate,
            "buffers": float(1 / (1 + self.delta)),
        }

    def nominal_rate(self) -> float:
        """log2|C| / (n m (1 + delta))."""
        return self.message_bits / float(self.nominal_length)

    def inner_index(self, i: int, value: int) -> int:
        return i * self.symbol_space + value

    def split_index(self, index: int) -> tuple[int, int]:
        return divmod(index, self.symbol_space)

    def layout(self) -> "Layout":
        from .channel import Layout

        step = self.m + self.buffer_len
        blocks = [(i * step, i * step + self.m) for i in range(self.n)]
        chunks = [(a + self.m, a + self.m + self.buffer_len) for a, _ in blocks[:-1]]
        return Layout(blocks=blocks, chunks=chunks, k=2, buffer_len=self.buffer_len)

    def check(self) -> list[str]:
        """Re-verify every invariant; returns human-readable problems (empty when sound)."""
        problems = list(self.inner.check())
        t = self.inner
        if t.k != 2:
            problems.append(f"inner alphabet {t.k} is not binary")
        if len(t) != self.q ** (self.h + 1):
            problems.append(f"inner table has {len(t)} codewords, needs q^(h+1) = {self.q ** (self.h + 1)}")
        if len(t) and not (np.all(t.words[:, 0] == 1) and np.all(t.words[:, -1] == 1)):
            problems.append("some inner codeword does not begin and end with 1")
        if t.verified_radius < self.inner_distance:
            problems.append(f"inner radius {t.verified_radius} < floor(delta m) = {self.inner_distance}")
        if not 0 < self.delta < Fraction(1, 2):
            problems.append("delta must lie in (0, 1/2)")
        if self.mode == "paper":
            window = ceil_frac(self.delta * self.m / 16)
            need = ceil_frac(Fraction(window, 10))
            if not all(density_ok(w, window, need) for w in t.words):
                problems.append(f"inner density below 1/10 ones per {window}-window")
        elif self.detect_ones == 0:
            if not all(density_ok(w, self.buffer_len, 1) for w in t.words):
                problems.append(f"an inner codeword contains {self.buffer_len} zeros in a row")
        return problems


# ---------------------------------------------------------------------------
# construction


def inner_density(delta, m: int, theta_buf=DEFAULT_THETA_BUF) -> tuple[int, int]:
    """Explicit-mode density rule: every B-window holds more than floor(theta_buf B) ones."""
    B = ceil_frac(as_fraction(delta) * m)
    return B, floor_frac(as_fraction(theta_buf) * B) + 1


def search_inner(q: int, h: int, delta, m: int, theta_buf=DEFAULT_THETA_BUF, *, seed: int = 0,
                 stall: int = 20000, candidate_budget: int | None = None) -> CodeTable:
    """Dense binary table with exactly q^(h+1) words, or :class:`ConstructionFailure`."""
    need = q ** (h + 1)
    delta = as_fraction(delta)
    density = inner_density(delta, m, theta_buf)
    lex = m <= 22
    table = search_dense_binary(
        m, delta, delta / 16, True, density=density, order="lex" if lex else "random",
        max_size=need, seed=seed, stall=None if lex else stall,
        candidate_budget=None if lex else (candidate_budget or max(200000, 64 * need)))
    if len(table) < need:
        raise ConstructionFailure(
            f"inner search at m={m}, delta={delta} found {len(table)} of {need} codewords; "
            "m must grow")
    return table


def build_highrate(eps=None, q: int = 16, mode: str = "explicit", *, delta=None, m: int | None = None,
                   h: int | None = None, d: int | None = None, theta_buf=DEFAULT_THETA_BUF,
                   m_range: Sequence[int] = tuple(range(12, 65, 4)), seed: int = 0,
                   table: CodeTable | None = None) -> HighRateSpec:
    """Build and verify a :class:`HighRateSpec`.

    Paper mode derives ``delta = 40 sqrt(eps)`` and ``h = ceil(1/eps)`` and
    refuses when the inner table it implies is beyond search. Explicit mode
    takes ``delta``, ``h``, ``d`` and either ``m`` or a range of lengths to try.
    """
    if mode == "paper":
        if eps is None:
            raise InvalidInputError("paper mode needs eps")
        eps = as_fraction(eps)
        if not 0 < eps < EPS0:
            raise InvalidInputError(f"paper mode needs 0 < eps < 1/121^2, got {eps}")
        delta = 40 * math.sqrt(eps)
        h = math.ceil(1 / eps)
        digits = int((h + 1) * math.log10(q)) + 1
        raise ConstructionFailure(
            f"paper mode with eps={float(eps):.3g} needs an inner table of q^(h+1) codewords "
            f"(a {digits}-digit count, h={h}, delta={delta:.4f}); m must grow beyond any search")
    if mode != "explicit":
        raise InvalidInputError(f"unknown mode {mode!r}")
    if delta is None or h is None:
        raise InvalidInputError("explicit mode needs delta and h")
    delta = as_fraction(delta)
    if not 0 < delta < Fraction(1, 2):
        raise InvalidInputError("delta must lie in (0, 1/2)")
    if d is None:
        d = max(1, q // 8)
    if table is None:
        lengths = [m] if m is not None else list(m_range)
        notes = []
        for length in lengths:
            try:
                table = search_inner(q, h, delta, length, theta_buf, seed=seed)
                break
            except ConstructionFailure as exc:
                notes.append(str(exc))
        if table is None:
            raise ConstructionFailure("; ".join(notes))
    spec = HighRateSpec(q=q, h=h, d=d, delta=delta, inner=table, theta_buf=as_fraction(theta_buf),
                        eps=None if eps is None else as_fraction(eps), mode="explicit")
    problems = spec.check()
    if problems:
        raise ConstructionFailure("; ".join(problems))
    return spec


def design_budget(spec: HighRateSpec) -> int:
    """Largest edit count the decoder is guaranteed to survive (see module docstring)."""
    if spec.detect_ones != 0:
        raise ParameterError("design budget is derived only for buffers with zero ones "
                             f"(floor(theta_buf B) = {spec.detect_ones})")
    return (spec.n - spec.d) // 5


# ---------------------------------------------------------------------------
# encoding


def hr_encode(spec: HighRateSpec, message: Poly) -> SymbolString:
    values = rs_encode(spec.outer, message)
    zeros = (0,) * spec.buffer_len
    out: list[int] = []
    for i, v in enumerate(values):
        if i:
            out.extend(zeros)
        out.extend(spec.inner.words[spec.inner_index(i, v)].tolist())
    return SymbolString(tuple(out), 2)


def random_message(spec: HighRateSpec, rng: np.random.Generator) -> Poly:
    return poly_trim(rng.integers(0, spec.symbol_space, size=spec.d).tolist())


# ---------------------------------------------------------------------------
# buffers


@dataclass(frozen=True)
class BufferScanResult:
    """Detected buffer spans and the windows between them (half-open intervals)."""

    spans: tuple[tuple[int, int], ...]
    windows: tuple[tuple[int, int], ...]
    length: int

    def window_strings(self, s) -> list[tuple]:
        s = _symbols(s)
        return [s[a:b] for a, b in self.windows]


def find_buffers(s, B: int, theta_buf=DEFAULT_THETA_BUF) -> BufferScanResult:
    """Greedy left-to-right scan for length-``B`` windows with at most floor(theta_buf B) ones."""
    if B < 1:
        raise InvalidInputError("buffer length must be positive")
    arr = np.asarray(_symbols(s), dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise InvalidInputError("buffer scan needs a binary string")
    limit = floor_frac(as_fraction(theta_buf) * B)
    n = len(arr)
    csum = np.concatenate(([0], np.cumsum(arr)))
    ok = (csum[B:] - csum[:-B] <= limit) if n >= B else np.zeros(0, dtype=bool)
    cand = np.flatnonzero(ok)
    spans = []
    pos = 0
    k = 0
    while k < len(cand):
        start = int(cand[k])
        if start < pos:
            k = int(np.searchsorted(cand, pos))
            continue
        spans.append((start, start + B))
        pos = start + B
        k += 1
    windows = []
    prev = 0
    for a, b in spans:
        windows.append((prev, a))
        prev = b
    windows.append((prev, n))
    return BufferScanResult(tuple(spans), tuple(windows), n)


# ---------------------------------------------------------------------------
# decoding


@dataclass
class HRDecodeTrace:
    scan: BufferScanResult
    pairs: list[tuple[int, int]]
    received: list[int | None]
    message: Poly | None = None
    failure: str | None = None


def hr_decode_trace(spec: HighRateSpec, s, memo: dict | None = None) -> HRDecodeTrace:
    """Run the full decoder and keep every intermediate result."""
    s = _symbols(s)
    scan = find_buffers(s, spec.buffer_len, spec.theta_buf)
    index = spec.inner.index
    D = spec.inner_distance
    pairs = set()
    for a, b in scan.windows:
        if a == b:
            continue
        window = s[a:b]
        hit = memo.get(window, -2) if memo is not None else -2
        if hit == -2:
            dist = index.distances(window)
            ok = np.flatnonzero(dist <= D)
            hit = int(ok[0]) if ok.size == 1 else -1
            if memo is not None:
                memo[window] = hit
        if hit >= 0:
            pairs.add(spec.split_index(hit))
    claims: dict[int, set[int]] = {}
    for i, v in pairs:
        claims.setdefault(i, set()).add(v)
    received: list[int | None] = [None] * spec.n
    for i, vals in claims.items():
        if len(vals) == 1:
            received[i] = next(iter(vals))
    trace = HRDecodeTrace(scan, sorted(pairs), received)
    try:
        trace.message = rs_decode_ee(spec.outer, received)
    except DecodeFailure as exc:
        trace.failure = str(exc)
    return trace


def hr_decode(spec: HighRateSpec, s, memo: dict | None = None) -> Poly:
    trace = hr_decode_trace(spec, s, memo)
    if trace.message is None:
        raise DecodeFailure(trace.failure or "outer decoding failed")
    return trace.message


# ---------------------------------------------------------------------------
# instrumentation


@dataclass(frozen=True)
class BufferCensus:
    good: int
    bad: int
    distance: int
    errors: int
    erasures: int

    def bad_bound(self) -> int:
        return self.distance

    def good_bound(self, n: int, m: int) -> int:
        return (n - 1) - (1 if m >= 2 else 2) * self.distance

    def violations(self, spec: HighRateSpec) -> list[str]:
        out = []
        if self.bad > self.bad_bound():
            out.append(f"bad buffers {self.bad} > {self.bad_bound()}")
        if self.good < self.good_bound(spec.n, spec.m):
            out.append(f"good buffers {self.good} < {self.good_bound(spec.n, spec.m)}")
        if 2 * self.errors + self.erasures > 5 * self.distance:
            out.append(f"outer damage 2E+S = {2 * self.errors + self.erasures} > 5 Delta")
        return out


def outer_damage(spec: HighRateSpec, message: Poly, trace: HRDecodeTrace) -> tuple[int, int]:
    """(errors, erasures) of the received outer word against the true codeword."""
    truth = rs_encode(spec.outer, message)
    errors = sum(1 for r, v in zip(trace.received, truth) if r is not None and r != v)
    return errors, trace.received.count(None)


def buffer_census(spec: HighRateSpec, c, s, trace: HRDecodeTrace, message: Poly) -> BufferCensus:
    """Classify detected buffers against the leftmost canonical alignment of ``c`` and ``s``.

    A buffer is good when at least 3/4 of its symbols are matched into one chunk.
    """
    c, s = _symbols(c), _symbols(s)
    chunk_of = np.full(len(c), -1, dtype=np.int64)
    for j, (a, b) in enumerate(spec.layout().chunks):
        chunk_of[a:b] = j
    src = np.full(len(s), -1, dtype=np.int64)
    for op, i, j in alignment(c, s):
        if op == "M":
            src[j] = chunk_of[i]
    good = bad = 0
    for a, b in trace.scan.spans:
        hits = src[a:b]
        hits = hits[hits >= 0]
        best = int(np.bincount(hits).max()) if hits.size else 0
        if best >= GOOD_FRACTION * (b - a):
            good += 1
        else:
            bad += 1
    errors, erasures = outer_damage(spec, message, trace)
    return BufferCensus(good, bad, insdel_distance(c, s), errors, erasures)


# ---------------------------------------------------------------------------
# spec files


def dumps_spec(spec: HighRateSpec) -> str:
    lines = [
        "kind=highrate",
        f"q={spec.q}",
        f"h={spec.h}",
        f"d={spec.d}",
        f"delta={spec.delta}",
        f"m={spec.m}",
        f"theta_buf={spec.theta_buf}",
    ]
    if spec.eps is not None:
        lines.append(f"eps={spec.eps}")
    return "\n".join(lines) + "\n"


def loads_spec(text: str, table: CodeTable) -> HighRateSpec:
    kv = parse_kv(text)
    try:
        q = int(kv["q"])
        spec = HighRateSpec(q=q, h=int(kv["h"]), d=int(kv.get("d", max(1, q // 8))), delta=Fraction(kv["delta"]),
                            inner=table, theta_buf=Fraction(kv.get("theta_buf", "1/160")),
                            eps=Fraction(kv["eps"]) if "eps" in kv else None)
    except KeyError as exc:
        raise InvalidInputError(f"spec file missing {exc.args[0]!r}") from None
    if int(kv.get("m", spec.m)) != spec.m:
        raise InvalidInputError("spec m disagrees with the table")
    problems = spec.check()
    if problems:
        raise InvalidInputError("spec fails re-verification: " + "; ".join(problems))
    return spec


def parse_kv(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            key, sep, val = line.partition("=")
            if not sep:
                raise InvalidInputError(f"malformed spec line {line!r}")
            out[key.strip()] = val.strip()
    return out
