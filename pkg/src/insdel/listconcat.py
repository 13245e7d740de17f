"""List decoding of concatenated RS codes under insertions and deletions.

The outer code is RS over GF(q) with ``n = q``; the inner table maps the pair
``(alpha, beta)`` to codeword ``alpha * q + beta``. The decoder slides windows
on a grid of step ``g = floor(gamma m / 2)``, keeps every window that lies
within ``floor((1 - delta) m)`` of exactly one inner codeword, list-decodes the
collected pairs with Sudan's algorithm at threshold ``ceil(gamma n / 2)`` and
returns the unique candidate whose encoding is close enough to the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractViolation, DecodeFailure, InvalidInputError, ParameterError
from .gf import FieldSpec, Poly, gf, poly_eval_many, poly_trim
from .innersearch import CodeTable, as_fraction, ceil_frac, floor_frac
from .rs import RSCodeSpec, rs_encode, sudan_list_decode
from .seqkit import SymbolString, _symbols, alignment, insdel_distance, partition_by_blocks


@dataclass(frozen=True)
class ConcatCodeSpec:
    """Outer RS code, inner table of q^2 words and the decoder parameters delta, gamma."""

    outer: RSCodeSpec
    inner: CodeTable
    delta: Fraction
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if self.outer.n != self.outer.field.q:
            raise InvalidInputError("outer block length must equal the field order")
        if not 0 < self.gamma < 1 or not 0 <= self.delta < 1:
            raise InvalidInputError("need 0 < gamma < 1 and 0 <= delta < 1")

    @property
    def q(self) -> int:
        return self.outer.field.q

    @property
    def n(self) -> int:
        return self.outer.n

    @property
    def m(self) -> int:
        return self.inner.m

    @property
    def k(self) -> int:
        return self.inner.k

    @property
    def length(self) -> int:
        return self.n * self.m

    @property
    def step(self) -> int:
        return max(1, floor_frac(self.gamma * self.m / 2))

    @property
    def inner_distance(self) -> int:
        return floor_frac((1 - self.delta) * self.m)

    @property
    def threshold(self) -> int:
        return ceil_frac(self.gamma * self.n / 2)

    @property
    def budget(self) -> int:
        """floor((1 - delta - gamma) N): the decoding radius in edits."""
        return max(0, floor_frac((1 - self.delta - self.gamma) * self.length))

    @property
    def start_range(self) -> int:
        return ceil_frac(2 * Fraction(self.n) / self.gamma)

    @property
    def span_range(self) -> int:
        return ceil_frac(4 / self.gamma)

    @property
    def candidate_bound(self) -> int:
        """ceil(2n / gamma) * ceil(4 / gamma)."""
        return self.start_range * self.span_range

    @property
    def rate(self) -> float:
        """log|C| / (N log k)."""
        return self.outer.d * math.log(self.q) / (self.length * math.log(self.k))

    def index(self, alpha: int, beta: int) -> int:
        return alpha * self.q + beta

    def layout(self):
        from .channel import Layout

        return Layout(blocks=[(i * self.m, (i + 1) * self.m) for i in range(self.n)], k=self.k)

    def check(self) -> list[str]:
        problems = list(self.inner.check())
        if len(self.inner) != self.q ** 2:
            problems.append(f"inner table has {len(self.inner)} codewords, needs q^2 = {self.q ** 2}")
        if self.inner.verified_radius < self.inner_distance:
            problems.append(f"inner radius {self.inner.verified_radius} < floor((1-delta)m) = "
                            f"{self.inner_distance}")
        return problems


def default_gamma(rate) -> float:
    return 4 * float(as_fraction(rate)) ** 0.25


def make_spec(q: int, d: int, inner: CodeTable, delta, gamma=None) -> ConcatCodeSpec:
    """Assemble and verify a spec; ``gamma`` defaults to 4 r^(1/4)."""
    outer = RSCodeSpec(gf(q), d, q)
    if gamma is None:
        gamma = Fraction(default_gamma(Fraction(d, q))).limit_denominator(10**6)
    spec = ConcatCodeSpec(outer, inner, as_fraction(delta), as_fraction(gamma))
    problems = spec.check()
    if problems:
        raise InvalidInputError("; ".join(problems))
    return spec


def concat_encode(spec: ConcatCodeSpec, message: Poly) -> SymbolString:
    values = rs_encode(spec.outer, message)
    rows = [spec.index(a, v) for a, v in zip(spec.outer.points, values)]
    return SymbolString(tuple(spec.inner.words[rows].reshape(-1).tolist()), spec.k)


def random_message(spec: ConcatCodeSpec, rng: np.random.Generator) -> Poly:
    return poly_trim(rng.integers(0, spec.q, size=spec.outer.d).tolist())


def window_grid(spec: ConcatCodeSpec, s_len: int) -> tuple[np.ndarray, list[int]]:
    """Window starts and lengths; starts extend past the nominal range to cover long inputs."""
    g = spec.step
    top = max(spec.start_range, math.ceil(s_len / g))
    starts = np.arange(top + 1) * g
    starts = starts[starts < s_len]
    return starts, [g * jj for jj in range(1, spec.span_range + 1)]


def window_sweep(spec: ConcatCodeSpec, s, dense: bool | None = None) -> set[tuple[int, int]]:
    """Candidate set: pairs from every grid window that decodes to a unique inner codeword.

    For large alphabets a window can only be close to codewords sharing many of
    its symbols, so candidates are pruned through an inverted symbol index before
    exact LCS. ``dense`` forces (True) or forbids (False) the unpruned kernel.
    """
    s = _symbols(s)
    if not s:
        return set()
    if any(not 0 <= x < spec.k for x in s):
        raise InvalidInputError("received symbol outside the inner alphabet")
    starts, lengths = window_grid(spec, len(s))
    if dense is None:
        dense = spec.k < 4 * spec.m
    hits = _dense_hits(spec, s, starts, lengths) if dense else _pruned_hits(spec, s, starts, lengths)
    # windows clipped to the same substring repeat; the set absorbs them
    return {divmod(idx, spec.q) for idx in hits}


def _dense_hits(spec, s, starts, lengths) -> list[int]:
    lcs = spec.inner.index.sweep(s, starts, lengths)
    true_len = np.minimum(starts[:, None] + np.asarray(lengths)[None, :], len(s)) - starts[:, None]
    close = spec.m + true_len[:, :, None] - 2 * lcs <= spec.inner_distance
    unique = close.sum(axis=2) == 1
    return [int(np.argmax(close[a, b])) for a, b in zip(*np.nonzero(unique))]


def _symbol_rows(table: CodeTable) -> dict[int, np.ndarray]:
    rows = getattr(table, "_symbol_rows", None)
    if rows is None:
        pairs = np.unique(np.stack([table.words.reshape(-1),
                                    np.repeat(np.arange(len(table)), table.m)], axis=1), axis=0)
        syms, first = np.unique(pairs[:, 0], return_index=True)
        rows = dict(zip(syms.tolist(), np.split(pairs[:, 1], first[1:])))
        table._symbol_rows = rows
    return rows


def _prefix_lcs(index, window, lengths, rows) -> np.ndarray:
    """LCS of each prefix ``window[:L]`` against the packed codewords in ``rows``."""
    full = index._full
    v = np.full(len(rows), full, dtype=index._dtype)
    out = np.zeros((len(lengths), len(rows)), dtype=np.int64)
    cp = 0
    for pos, sym in enumerate(window):
        u = v & index.mask(sym)[rows]
        v = ((v + u) | (v - u)) & full
        while cp < len(lengths) and lengths[cp] == pos + 1:
            out[cp] = index.m - np.bitwise_count(v)
            cp += 1
    if cp < len(lengths):
        out[cp:] = index.m - np.bitwise_count(v)
    return out


def _pruned_hits(spec, s, starts, lengths) -> list[int]:
    index = spec.inner.index
    rows_of = _symbol_rows(spec.inner)
    empty = np.zeros(0, dtype=np.int64)
    D, m = spec.inner_distance, spec.m
    hits = []
    for st in starts.tolist():
        window = s[st:st + lengths[-1]]
        # LCS(window, w) <= number of window positions whose symbol occurs in w
        need = max(1, math.ceil((min(lengths[0], len(window)) + m - D) / 2))
        found = np.concatenate([rows_of.get(x, empty) for x in window])
        if not found.size:
            continue
        counts = np.bincount(found)
        cand = np.flatnonzero(counts >= need)
        if not cand.size:
            continue
        lcs = _prefix_lcs(index, window, lengths, cand) if index.packed else \
            np.stack([index.lcs(window[:L], rows=cand) for L in lengths])
        true_len = np.minimum(np.asarray(lengths), len(window))
        close = m + true_len[:, None] - 2 * lcs <= D
        # a row outside ``cand`` can never be close, so uniqueness is decided here
        for b in np.flatnonzero(close.sum(axis=1) == 1):
            hits.append(int(cand[np.argmax(close[b])]))
    return hits


@dataclass
class ListDecodeTrace:
    candidates: set[tuple[int, int]]
    survivors: list[Poly]
    message: Poly | None = None
    failure: str | None = None


def list_concat_trace(spec: ConcatCodeSpec, s) -> ListDecodeTrace:
    s = _symbols(s)
    J = window_sweep(spec, s)
    A = spec.threshold
    if A * A <= 2 * spec.outer.d * len(J):
        raise ParameterError(f"Sudan threshold {A} fails A^2 > 2 d |J| with |J| = {len(J)}")
    trace = ListDecodeTrace(J, [])
    limit = (1 - spec.delta - spec.gamma) * spec.length
    for poly in sudan_list_decode(spec.outer, J, A):
        if insdel_distance(concat_encode(spec, poly), s) <= limit:
            trace.survivors.append(poly)
    if len(trace.survivors) == 1:
        trace.message = trace.survivors[0]
    elif not trace.survivors:
        trace.failure = "no list element lies within the decoding radius"
    return trace


def list_concat_decode(spec: ConcatCodeSpec, s) -> Poly:
    trace = list_concat_trace(spec, s)
    if len(trace.survivors) > 1:
        raise ContractViolation(f"{len(trace.survivors)} messages lie within the decoding radius")
    if trace.message is None:
        raise DecodeFailure(trace.failure or "decoding failed")
    return trace.message


# ---------------------------------------------------------------------------
# instrumentation


@dataclass(frozen=True)
class CoverageCensus:
    good: int
    good_missing: int
    candidates: int

    def violations(self, spec: ConcatCodeSpec) -> list[str]:
        out = []
        if 2 * self.good < spec.gamma * spec.n:
            out.append(f"good indices {self.good} < gamma n / 2 = {float(spec.gamma * spec.n / 2)}")
        if self.good_missing:
            out.append(f"{self.good_missing} good indices missing from the candidate set")
        if self.candidates > spec.candidate_bound:
            out.append(f"|J| = {self.candidates} > {spec.candidate_bound}")
        return out


def coverage_census(spec: ConcatCodeSpec, c, s, message: Poly, J: set) -> CoverageCensus:
    """Good blocks receive at most (1 - delta - gamma/2) m edits under the canonical alignment."""
    c, s = _symbols(c), _symbols(s)
    ops = alignment(c, s)
    bounds = [i * spec.m for i in range(1, spec.n)]
    cuts = [0] + partition_by_blocks(len(c), bounds, ops) + [len(s)]
    values = rs_encode(spec.outer, message)
    limit = (1 - spec.delta - spec.gamma / 2) * spec.m
    good = missing = 0
    for i in range(spec.n):
        part = s[cuts[i]:cuts[i + 1]]
        if insdel_distance(c[i * spec.m:(i + 1) * spec.m], part) <= limit:
            good += 1
            if (i, values[i]) not in J:
                missing += 1
    return CoverageCensus(good, missing, len(J))


# ---------------------------------------------------------------------------
# spec files


def dumps_spec(spec: ConcatCodeSpec) -> str:
    return "\n".join([
        "kind=concat",
        f"q={spec.q}",
        f"d={spec.outer.d}",
        f"delta={spec.delta}",
        f"gamma={spec.gamma}",
        f"m={spec.m}",
        f"k={spec.k}",
    ]) + "\n"


def loads_spec(text: str, table: CodeTable) -> ConcatCodeSpec:
    from .highrate import parse_kv

    kv = parse_kv(text)
    try:
        spec = make_spec(int(kv["q"]), int(kv["d"]), table, Fraction(kv["delta"]), Fraction(kv["gamma"]))
    except KeyError as exc:
        raise InvalidInputError(f"spec file missing {exc.args[0]!r}") from None
    if int(kv.get("m", spec.m)) != spec.m or int(kv.get("k", spec.k)) != spec.k:
        raise InvalidInputError("spec m/k disagree with the table")
    return spec
