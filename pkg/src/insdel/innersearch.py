"""Explicit inner codes found by greedy search, plus table-based encode/decode.

A :class:`CodeTable` is just a list of equal-length codewords with the decoding
radius it was verified to have. Tables are built greedily: candidates are
streamed in a fixed order (lexicographic, or a seeded shuffle for spaces too
big to enumerate) and accepted when they pass the density filter and keep the
pairwise LCS below the target.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import ConstructionFailure, InvalidInputError
from .seqkit import LcsIndex, _symbols, format_symbols, lcs_of_code, parse_symbols


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**6) if isinstance(x, float) else Fraction(x)


def ceil_frac(x) -> int:
    return math.ceil(as_fraction(x))


def floor_frac(x) -> int:
    return math.floor(as_fraction(x))


class CodeTable:
    """An explicit code: distinct, equal-length codewords over ``[k]``.

    ``density`` is ``(window, min_ones)``: every length-``window`` interval of
    every codeword holds at least ``min_ones`` ones (binary tables only).
    """

    def __init__(self, codewords, k: int, verified_radius: int | None = None,
                 density: tuple[int, int] | None = None, m: int | None = None):
        try:
            arr = np.asarray(codewords, dtype=np.int64)
        except ValueError:
            raise InvalidInputError("codewords must all have the same length") from None
        if arr.size == 0:
            arr = arr.reshape(0, m or 0)
        if arr.ndim != 2:
            raise InvalidInputError("codewords must all have the same length")
        self.words = arr
        self.k = k
        self.m = arr.shape[1]
        self.density = density
        self.verified_radius = self.compute_radius() if verified_radius is None else verified_radius
        self._index: LcsIndex | None = None
        self._lookup: dict[tuple, int] | None = None

    def __len__(self):
        return self.words.shape[0]

    def __repr__(self):
        return (f"CodeTable(size={len(self)}, m={self.m}, k={self.k}, "
                f"radius={self.verified_radius}, density={self.density})")

    @property
    def codewords(self) -> list[tuple[int, ...]]:
        return [tuple(row) for row in self.words.tolist()]

    @property
    def index(self) -> LcsIndex:
        if self._index is None:
            self._index = LcsIndex(self.words)
        return self._index

    @property
    def rate(self) -> float:
        """log|C| / (m log k)."""
        if len(self) < 2 or self.m == 0:
            return 0.0
        return math.log(len(self)) / (self.m * math.log(self.k))

    def lcs(self) -> int:
        return lcs_of_code(self.words.tolist())

    def compute_radius(self) -> int:
        """``m - LCS(C) - 1`` (for a singleton table, ``m - 1``)."""
        return self.m - self.lcs() - 1

    def index_of(self, word) -> int | None:
        if self._lookup is None:
            self._lookup = {w: i for i, w in enumerate(self.codewords)}
        return self._lookup.get(tuple(_symbols(word)))

    def truncated(self, size: int) -> "CodeTable":
        """First ``size`` codewords; the radius is re-verified on the smaller table."""
        if size > len(self):
            raise ConstructionFailure(f"table has {len(self)} codewords, {size} needed")
        return CodeTable(self.words[:size], self.k, density=self.density)

    def check(self) -> list[str]:
        """Problems found by re-verifying every claim; empty when the table is sound."""
        problems = []
        if len(set(self.codewords)) != len(self):
            problems.append("duplicate codewords")
        if self.words.size and (self.words.min() < 0 or self.words.max() >= self.k):
            problems.append("symbol outside alphabet")
        actual = self.compute_radius()
        if actual != self.verified_radius:
            problems.append(f"radius claim {self.verified_radius} != verified {actual}")
        if self.density is not None:
            window, need = self.density
            bad = [i for i, w in enumerate(self.words) if not density_ok(w, window, need)]
            if bad:
                problems.append(f"{len(bad)} codewords violate density {window}:{need}")
        return problems


def density_ok(word, window: int, min_ones: int) -> bool:
    """Every length-``window`` interval of ``word`` contains at least ``min_ones`` ones."""
    w = np.asarray(word, dtype=np.int64)
    if window > len(w):
        return True
    csum = np.concatenate(([0], np.cumsum(w == 1)))
    return bool((csum[window:] - csum[:-window]).min() >= min_ones)


class _Pool:
    """Accepted codewords with per-symbol bit masks for fast LCS screening."""

    def __init__(self, m: int, capacity: int = 64):
        self.m = m
        self.n = 0
        self.cap = capacity
        self.words: list[tuple] = []
        self.seen: set[tuple] = set()
        self.masks: dict[int, np.ndarray] = {}
        self.full = np.uint64((1 << m) - 1) if m <= 63 else None
        self._index: LcsIndex | None = None

    def _mask(self, sym):
        mk = self.masks.get(sym)
        if mk is None:
            mk = np.zeros(self.cap, dtype=np.uint64)
            self.masks[sym] = mk
        return mk

    def max_lcs(self, cand: tuple) -> int:
        if self.n == 0:
            return -1
        if self.full is None:
            if self._index is None:
                self._index = LcsIndex(np.asarray(self.words))
            return int(self._index.lcs(cand).max())
        v = np.full(self.n, self.full, dtype=np.uint64)
        for sym in cand:
            mk = self.masks.get(sym)
            if mk is None:
                continue
            u = v & mk[: self.n]
            v = ((v + u) | (v - u)) & self.full
        return self.m - int(np.bitwise_count(v).min())

    def add(self, word: tuple):
        if self.n == self.cap:
            self.cap *= 2
            for sym, mk in self.masks.items():
                grown = np.zeros(self.cap, dtype=np.uint64)
                grown[: self.n] = mk
                self.masks[sym] = grown
        if self.full is not None:
            for pos, sym in enumerate(word):
                self._mask(sym)[self.n] |= np.uint64(1 << pos)
        self.words.append(word)
        self._index = None
        self.seen.add(word)
        self.n += 1


def _lex_dfs(m: int, k: int, max_lcs: int, density, endpoints: bool, max_size: int | None,
             pool: _Pool):
    """Lexicographic greedy search as a depth-first walk with prefix pruning.

    LCS(prefix, w) never exceeds LCS(completion, w), and a density window that
    already fails inside the prefix fails for every completion, so pruned
    subtrees hold no acceptable candidate. Leaves are visited in lex order,
    which makes the result identical to scanning all of [k]^m.
    """
    full = pool.full
    prefix: list[int] = []
    ones = [0]

    def extend(v, depth):
        # add state lanes for codewords accepted since ``v`` was computed
        if len(v) == pool.n:
            return v
        extra = np.full(pool.n - len(v), full, dtype=np.uint64)
        for sym in prefix[:depth]:
            mk = pool.masks.get(sym)
            if mk is not None:
                u = extra & mk[len(v):pool.n]
                extra = ((extra + u) | (extra - u)) & full
        return np.concatenate([v, extra])

    def walk(depth, v):
        if max_size is not None and pool.n >= max_size:
            return
        if depth == m:
            pool.add(tuple(prefix))
            return
        choices = (1,) if endpoints and (depth == 0 or depth == m - 1) else range(k)
        for sym in choices:
            if max_size is not None and pool.n >= max_size:
                return
            v = extend(v, depth)
            prefix.append(sym)
            ones.append(ones[-1] + (sym == 1))
            ok = True
            if density is not None:
                win, need = density
                if depth + 1 >= win and ones[-1] - ones[-1 - win] < need:
                    ok = False
            if ok:
                mk = pool.masks.get(sym)
                nv = v
                if mk is not None and pool.n:
                    u = v & mk[:pool.n]
                    nv = ((v + u) | (v - u)) & full
                if pool.n and m - int(np.bitwise_count(nv).min()) > max_lcs:
                    ok = False
            if ok:
                walk(depth + 1, nv)
            prefix.pop()
            ones.pop()

    walk(0, np.zeros(0, dtype=np.uint64))


def _lex_candidates(m: int, k: int, endpoints: bool) -> Iterator[tuple]:
    if endpoints:
        if m == 1:
            yield (1,)
            return
        for mid in itertools.product(range(k), repeat=m - 2):
            yield (1,) + mid + (1,)
    else:
        yield from itertools.product(range(k), repeat=m)


def _random_candidates(m: int, k: int, endpoints: bool, seed: int) -> Iterator[tuple]:
    rng = np.random.default_rng(seed)
    while True:
        batch = rng.integers(0, k, size=(4096, m))
        if endpoints and m:
            batch[:, 0] = 1
            batch[:, -1] = 1
        for row in batch.tolist():
            yield tuple(row)


def greedy_search(m: int, k: int, max_lcs: int, *, density: tuple[int, int] | None = None,
                  endpoints: bool = False, order: str = "lex", max_size: int | None = None,
                  seed: int = 0, candidate_budget: int | None = None,
                  stall: int | None = None) -> CodeTable:
    """Greedy code construction shared by the binary and k-ary searches.

    In ``"lex"`` order with no ``max_size`` the result is maximal: no remaining
    candidate can be added. ``"random"`` streams seeded uniform candidates and
    stops at ``max_size``, after ``candidate_budget`` draws, or after ``stall``
    consecutive rejections.
    """
    if order not in ("lex", "random"):
        raise InvalidInputError(f"unknown search order {order!r}")
    if order == "random" and max_size is None and candidate_budget is None and stall is None:
        raise InvalidInputError("random order needs max_size, candidate_budget or stall")
    pool = _Pool(m)
    if order == "lex" and pool.full is not None and (density is None or density[0] <= m):
        _lex_dfs(m, k, max_lcs, density, endpoints, max_size, pool)
        cands = iter(())
    else:
        cands = _lex_candidates(m, k, endpoints) if order == "lex" else _random_candidates(m, k, endpoints, seed)
    examined = rejected = 0
    for cand in cands:
        if max_size is not None and pool.n >= max_size:
            break
        if candidate_budget is not None and examined >= candidate_budget:
            break
        if stall is not None and rejected >= stall:
            break
        examined += 1
        if (cand in pool.seen or (density is not None and not density_ok(cand, *density))
                or pool.max_lcs(cand) > max_lcs):
            rejected += 1
            continue
        rejected = 0
        pool.add(cand)
    if pool.n == 0:
        raise ConstructionFailure(
            f"no codeword of length {m} passes the filters (density={density}, endpoints={endpoints})")
    return CodeTable(pool.words, k, verified_radius=None, density=density, m=m)


def search_dense_binary(m: int, delta, beta, require_endpoints: bool = True, *,
                        density: tuple[int, int] | None = None, order: str = "lex",
                        max_size: int | None = None, seed: int = 0,
                        candidate_budget: int | None = None, stall: int | None = None) -> CodeTable:
    """Binary code with LCS < (1 - delta) m whose codewords are dense in ones.

    The default density rule asks every window of ceil(beta m) symbols to hold
    ceil(beta m / 10) ones; ``density`` overrides it with an explicit
    ``(window, min_ones)`` pair.
    """
    delta, beta = as_fraction(delta), as_fraction(beta)
    if not 0 < delta < 1 or not 0 < beta < 1:
        raise InvalidInputError("delta and beta must lie in (0, 1)")
    if m < 1:
        raise InvalidInputError("length must be positive")
    max_lcs = ceil_frac((1 - delta) * m) - 1
    if max_lcs < 0:
        raise InvalidInputError("(1 - delta) m must be positive")
    if density is None:
        density = (ceil_frac(beta * m), ceil_frac(beta * m / 10))
    return greedy_search(m, 2, max_lcs, density=density, endpoints=require_endpoints, order=order,
                         max_size=max_size, seed=seed, candidate_budget=candidate_budget, stall=stall)


def search_kary(m: int, k: int, tau, *, order: str = "lex", max_size: int | None = None,
                seed: int = 0, candidate_budget: int | None = None,
                stall: int | None = None) -> CodeTable:
    """Code over ``[k]`` decoding a ``tau`` fraction of insertions/deletions (LCS < (1 - tau) m)."""
    tau = as_fraction(tau)
    if k < 2:
        raise InvalidInputError("alphabet size must be >= 2")
    if not 0 <= tau < 1:
        raise InvalidInputError("target fraction must lie in [0, 1)")
    max_lcs = ceil_frac((1 - tau) * m) - 1
    return greedy_search(m, k, max_lcs, order=order, max_size=max_size, seed=seed,
                         candidate_budget=candidate_budget, stall=stall)


def inner_encode(table: CodeTable, index: int) -> tuple[int, ...]:
    if not 0 <= index < len(table):
        raise InvalidInputError(f"index {index} outside [0, {len(table)})")
    return tuple(table.words[index].tolist())


def inner_decode(table: CodeTable, window, max_distance: int) -> int | None:
    """Index of the unique codeword within insdel distance ``max_distance`` of ``window``.

    Returns ``None`` when no codeword or more than one codeword qualifies.
    """
    window = _symbols(window)
    if any(not 0 <= x < table.k for x in window):
        raise InvalidInputError("window symbol outside the table alphabet")
    dist = table.index.distances(window)
    hits = np.flatnonzero(dist <= max_distance)
    return int(hits[0]) if hits.size == 1 else None


# ---------------------------------------------------------------------------
# file format


def dumps_table(table: CodeTable) -> str:
    lines = [f"m={table.m}", f"k={table.k}", f"radius={table.verified_radius}"]
    if table.density is not None:
        lines.append(f"density={table.density[0]}:{table.density[1]}")
    lines += [format_symbols(w, table.k) for w in table.codewords]
    return "\n".join(lines) + "\n"


def loads_table(text: str, verify: bool = True) -> CodeTable:
    """Parse a table file; header claims are re-verified unless ``verify`` is false."""
    header: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if not body and "=" in line:
            key, _, val = line.partition("=")
            header[key.strip()] = val.strip()
        elif line.strip():
            body.append(line.strip())
    try:
        m, k, radius = int(header["m"]), int(header["k"]), int(header["radius"])
    except KeyError as exc:
        raise InvalidInputError(f"table header missing {exc.args[0]!r}") from None
    density = None
    if "density" in header:
        win, _, cnt = header["density"].partition(":")
        density = (int(win), int(cnt))
    words = [parse_symbols(line, k).symbols for line in body]
    if any(len(w) != m for w in words):
        raise InvalidInputError("codeword length disagrees with header m")
    table = CodeTable(words, k, verified_radius=radius, density=density, m=m)
    if verify:
        problems = table.check()
        if problems:
            raise InvalidInputError("table fails re-verification: " + "; ".join(problems))
    return table
