"""Sequence kernels for insertion/deletion coding.

Everything here works on plain integer sequences; :class:`SymbolString` adds an
explicit alphabet size so that mixing alphabets is caught early.

The LCS kernels are bit-parallel: one side of the comparison is packed into
machine words (a Python ``int`` for single pairs, ``uint64`` lanes for batches)
and the other side is streamed one symbol at a time.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceLimitError

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class SymbolString:
    """A finite string over the alphabet ``{0, ..., k-1}``."""

    symbols: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise InvalidInputError(f"alphabet size must be >= 2, got {self.k}")
        syms = tuple(int(x) for x in self.symbols)
        for x in syms:
            if not 0 <= x < self.k:
                raise InvalidInputError(f"symbol {x} outside alphabet [0, {self.k})")
        object.__setattr__(self, "symbols", syms)

    @classmethod
    def from_str(cls, text: str, k: int = 2) -> "SymbolString":
        """Parse single-character base-36 digits, e.g. ``SymbolString.from_str("0110")``."""
        return cls(tuple(DIGITS.index(ch) for ch in text.lower()), k)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return SymbolString(self.symbols[item], self.k)
        return self.symbols[item]

    def __add__(self, other: "SymbolString") -> "SymbolString":
        _check_alphabets(self, other)
        return SymbolString(self.symbols + other.symbols, self.k)

    def __str__(self):
        return format_symbols(self.symbols, self.k)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.symbols, dtype=np.int64)


class ErrorKind(enum.Enum):
    DELETIONS = "deletions"
    INSERTIONS = "insertions"
    MIXED = "mixed"


@dataclass(frozen=True)
class ErrorModel:
    kind: ErrorKind
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise InvalidInputError("error budget must be a non-negative count")


def _check_alphabets(a, b):
    ka = getattr(a, "k", None)
    kb = getattr(b, "k", None)
    if ka is not None and kb is not None and ka != kb:
        raise InvalidInputError(f"alphabet mismatch: {ka} vs {kb}")


def _symbols(x) -> tuple:
    if isinstance(x, SymbolString):
        return x.symbols
    if isinstance(x, str):
        return tuple(DIGITS.index(ch) for ch in x.lower())
    return tuple(int(v) for v in x)


def _alphabet_of(x) -> int | None:
    return x.k if isinstance(x, SymbolString) else None


# ---------------------------------------------------------------------------
# pairwise kernels


def lcs(a, b) -> int:
    """Length of the longest common subsequence of ``a`` and ``b``.

    Runs in O(|a|*|b|/w) word operations and keeps only a bit vector as long
    as the shorter input.
    """
    _check_alphabets(a, b)
    x, y = _symbols(a), _symbols(b)
    if len(x) > len(y):
        x, y = y, x
    if not x:
        return 0
    masks: dict[int, int] = {}
    for i, sym in enumerate(x):
        masks[sym] = masks.get(sym, 0) | (1 << i)
    full = (1 << len(x)) - 1
    v = full
    for sym in y:
        mk = masks.get(sym)
        if mk:
            u = v & mk
            v = ((v + u) | (v - u)) & full
    return len(x) - v.bit_count()


def insdel_distance(a, b) -> int:
    """Minimum number of insertions plus deletions turning ``a`` into ``b``."""
    return len(_symbols(a)) + len(_symbols(b)) - 2 * lcs(a, b)


def _check_code(code) -> list[tuple]:
    words = [_symbols(c) for c in code]
    alphabets = {_alphabet_of(c) for c in code} - {None}
    if len(alphabets) > 1:
        raise InvalidInputError(f"codewords over different alphabets: {sorted(alphabets)}")
    if len({len(w) for w in words}) > 1:
        raise InvalidInputError("codewords have different lengths")
    return words


def lcs_of_code(code: Sequence) -> int:
    """Maximum LCS over pairs of distinct codewords (0 when there is no such pair)."""
    words = _check_code(code)
    if len(words) < 2:
        return 0
    arr = np.asarray(words, dtype=np.int64)
    if arr.shape[1] == 0:
        return 0
    best = 0
    index = LcsIndex(arr)
    for i in range(len(words) - 1):
        vals = index.lcs(words[i], rows=slice(i + 1, None))
        same = np.all(arr[i + 1:] == arr[i], axis=1)
        vals = vals[~same]
        if vals.size:
            best = max(best, int(vals.max()))
    return best


def radius_from_lcs(code: Sequence) -> int:
    """Largest ``t`` such that the code corrects ``t`` deletions: ``n - LCS(C) - 1``."""
    words = _check_code(code)
    if len(words) < 2:
        raise InvalidInputError("radius needs at least two codewords")
    if len(set(words)) != len(words):
        raise InvalidInputError("code contains a repeated codeword")
    return len(words[0]) - lcs_of_code(code) - 1


# ---------------------------------------------------------------------------
# exhaustive oracles


def _deletion_neighbours(w: tuple, k: int):
    for i in range(len(w)):
        if i and w[i] == w[i - 1]:
            continue
        yield w[:i] + w[i + 1:]


def _insertion_neighbours(w: tuple, k: int):
    for i in range(len(w) + 1):
        for sym in range(k):
            yield w[:i] + (sym,) + w[i:]


def _mixed_neighbours(w: tuple, k: int):
    yield from _deletion_neighbours(w, k)
    yield from _insertion_neighbours(w, k)


_NEIGHBOURS = {
    ErrorKind.DELETIONS: _deletion_neighbours,
    ErrorKind.INSERTIONS: _insertion_neighbours,
    ErrorKind.MIXED: _mixed_neighbours,
}


def error_ball(word, model: ErrorModel, k: int, node_budget: int = DEFAULT_NODE_BUDGET) -> set:
    """All strings reachable from ``word`` using at most ``model.budget`` edits of ``model.kind``."""
    step = _NEIGHBOURS[model.kind]
    ball = {_symbols(word)}
    frontier = set(ball)
    for _ in range(model.budget):
        nxt = set()
        for w in frontier:
            for x in step(w, k):
                if x not in ball:
                    nxt.add(x)
        ball |= nxt
        if len(ball) > node_budget:
            raise ResourceLimitError(f"error ball exceeds node budget {node_budget}")
        frontier = nxt
        if not frontier:
            break
    return ball


def decodable_under(code: Sequence, model: ErrorModel, k: int | None = None,
                    node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Decide by enumeration whether the error balls of distinct codewords are disjoint.

    ``k`` defaults to the codewords' alphabet (``SymbolString``) or else to the
    smallest alphabet containing every symbol (at least 2).
    """
    words = _check_code(code)
    if len(words) < 2:
        raise InvalidInputError("decodability needs at least two codewords")
    if len(set(words)) != len(words):
        raise InvalidInputError("code contains a repeated codeword")
    if k is None:
        k = next(iter({_alphabet_of(c) for c in code} - {None}), None)
    if k is None:
        k = max(2, 1 + max((max(w) for w in words if w), default=0))
    owner: dict[tuple, int] = {}
    spent = 0
    for idx, w in enumerate(words):
        ball = error_ball(w, model, k, node_budget - spent)
        spent += len(ball)
        if spent > node_budget:
            raise ResourceLimitError(f"enumeration exceeds node budget {node_budget}")
        for x in ball:
            prev = owner.setdefault(x, idx)
            if prev != idx:
                return False
    return True


def bfs_insdel_distance(a, b, limit: int | None = None) -> int:
    """Insdel distance by breadth-first search over single edits (independent oracle).

    Only practical for short strings; the alphabet is taken from the symbols
    present in either string since inserting any other symbol never helps.
    """
    x, y = _symbols(a), _symbols(b)
    alphabet = sorted(set(x) | set(y)) or [0]
    if x == y:
        return 0
    limit = len(x) + len(y) if limit is None else limit
    seen = {x}
    frontier = [x]
    for dist in range(1, limit + 1):
        nxt = []
        for w in frontier:
            for i in range(len(w)):
                z = w[:i] + w[i + 1:]
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
            if len(w) < len(y):
                for i in range(len(w) + 1):
                    for sym in alphabet:
                        z = w[:i] + (sym,) + w[i:]
                        if z not in seen:
                            seen.add(z)
                            nxt.append(z)
        if y in seen:
            return dist
        frontier = nxt
    raise ResourceLimitError("distance exceeds search limit")


# ---------------------------------------------------------------------------
# alignment


def alignment(c, s) -> list[tuple[str, int, int]]:
    """Canonical optimal edit script between ``c`` and ``s``.

    Returns ops ``("M", i, j)`` (c[i] kept as s[j]), ``("D", i, j)`` (c[i]
    deleted before s[j]) and ``("I", i, j)`` (s[j] inserted before c[i]) in
    left-to-right order. Ties in the backtrace prefer a match, then a deletion,
    so the script is the leftmost-alignment LCS backtrace.
    """
    x = np.asarray(_symbols(c), dtype=np.int64)
    y = np.asarray(_symbols(s), dtype=np.int64)
    n, m = len(x), len(y)
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(1, n + 1):
        eq = (y == x[i - 1]).astype(np.int32)
        cand = np.maximum(table[i - 1, 1:], table[i - 1, :-1] + eq)
        table[i, 1:] = np.maximum.accumulate(cand)
    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and x[i - 1] == y[j - 1] and table[i, j] == table[i - 1, j - 1] + 1:
            ops.append(("M", i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and (j == 0 or table[i - 1, j] >= table[i, j - 1]):
            ops.append(("D", i - 1, j))
            i -= 1
        else:
            ops.append(("I", i, j - 1))
            j -= 1
    ops.reverse()
    return ops


def partition_by_blocks(c_len: int, boundaries: Sequence[int], ops) -> list[int]:
    """Cut points in ``s`` induced by cutting ``c`` at ``boundaries`` under ``ops``.

    An insertion is charged to the block whose characters follow it, so each
    edit of the script lands in exactly one part.
    """
    cuts = []
    bounds = list(boundaries)
    b = 0
    for op, i, j in ops:
        while b < len(bounds) and i >= bounds[b]:
            cuts.append(j)
            b += 1
    s_len = sum(1 for op, _, _ in ops if op != "D")
    while b < len(bounds):
        cuts.append(s_len)
        b += 1
    return cuts


# ---------------------------------------------------------------------------
# batched kernel


_LIMB = 32


class LcsIndex:
    """Batched LCS of many equal-length codewords against streamed strings.

    Codewords of length <= 63 are packed one per ``uint64`` lane; longer ones
    are split over 32-bit limbs with explicit carries.
    """

    def __init__(self, codewords):
        arr = np.asarray(codewords, dtype=np.int64)
        if arr.ndim != 2:
            raise InvalidInputError("codewords must form a 2-D array")
        self.words = arr
        self.m = arr.shape[1]
        self.packed = self.m <= 63
        # 32-bit lanes halve memory traffic; v + u stays below 2^(m+1)
        self._dtype = np.uint32 if self.m <= 31 else np.uint64
        self._pow2 = (self._dtype(1) << np.arange(self.m, dtype=self._dtype)) if self.packed else None
        self._full = self._dtype((1 << self.m) - 1) if self.packed else None
        self._masks: dict[int, np.ndarray] = {}

    def __len__(self):
        return self.words.shape[0]

    def mask(self, sym: int) -> np.ndarray:
        mk = self._masks.get(sym)
        if mk is None:
            hits = self.words == sym
            mk = (hits.astype(self._dtype) * self._pow2).sum(axis=1, dtype=self._dtype)
            self._masks[sym] = mk
        return mk

    def lcs(self, s, rows=slice(None)) -> np.ndarray:
        """LCS of ``s`` with every codeword (restricted to ``rows``)."""
        s = _symbols(s)
        count = len(range(*rows.indices(len(self)))) if isinstance(rows, slice) else len(rows)
        if self.m == 0 or not s:
            return np.zeros(count, dtype=np.int64)
        if not self.packed:
            return self._lcs_dp(s, rows)
        v = np.full(count, self._full, dtype=self._dtype)
        for sym in s:
            u = v & self.mask(sym)[rows]
            v = ((v + u) | (v - u)) & self._full
        return self.m - np.bitwise_count(v).astype(np.int64)

    def _limb_masks(self, sym: int) -> np.ndarray:
        mk = self._masks.get(sym)
        if mk is None:
            W = -(-self.m // _LIMB)
            padded = np.zeros((len(self), W * _LIMB), dtype=bool)
            padded[:, : self.m] = self.words == sym
            weights = np.uint64(1) << np.arange(_LIMB, dtype=np.uint64)
            mk = (padded.reshape(len(self), W, _LIMB).astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
            self._masks[sym] = mk
        return mk

    def _lcs_dp(self, s, rows):
        # bit-parallel over 32-bit limbs held in uint64 so that carries are visible
        W = -(-self.m // _LIMB)
        low = np.uint64((1 << _LIMB) - 1)
        top = np.uint64((1 << (self.m - _LIMB * (W - 1))) - 1)
        full = np.full(W, low, dtype=np.uint64)
        full[-1] = top
        count = len(self.words[rows])
        v = np.tile(full, (count, 1))
        shift = np.uint64(_LIMB)
        for sym in s:
            u = v & self._limb_masks(sym)[rows]
            rest = v & ~u
            carry = np.zeros(count, dtype=np.uint64)
            for w in range(W):
                total = v[:, w] + u[:, w] + carry
                carry = total >> shift
                v[:, w] = (total & low) | rest[:, w]
            v &= full
        return self.m - np.bitwise_count(v).sum(axis=1).astype(np.int64)

    def distances(self, s) -> np.ndarray:
        """Insdel distance from ``s`` to every codeword."""
        return self.m + len(_symbols(s)) - 2 * self.lcs(s)

    def sweep(self, s, starts: Sequence[int], checkpoints: Sequence[int]) -> np.ndarray:
        """LCS of every window ``s[start:start+L]`` (clipped) against every codeword.

        Returns an array of shape ``(len(starts), len(checkpoints), n_words)``
        where checkpoint lengths must be increasing.
        """
        s_arr = np.asarray(_symbols(s), dtype=np.int64)
        starts = np.asarray(starts, dtype=np.int64)
        checkpoints = list(checkpoints)
        out = np.zeros((len(starts), len(checkpoints), len(self)), dtype=np.int64)
        if not len(starts) or not checkpoints or self.m == 0 or not len(s_arr):
            return out
        if not self.packed:
            for a, st in enumerate(starts):
                for b, length in enumerate(checkpoints):
                    out[a, b] = self.lcs(s_arr[st:st + length])
            return out
        uniq, inv = np.unique(s_arr, return_inverse=True)
        table = np.stack([self.mask(int(u)) for u in uniq] + [np.zeros(len(self), dtype=self._dtype)])
        blank = len(uniq)
        v = np.full((len(starts), len(self)), self._full, dtype=self._dtype)
        cp = 0
        for t in range(checkpoints[-1]):
            pos = starts + t
            idx = np.where(pos < len(s_arr), inv[np.minimum(pos, len(s_arr) - 1)], blank)
            u = v & table[idx]
            v = ((v + u) | (v - u)) & self._full
            while cp < len(checkpoints) and checkpoints[cp] == t + 1:
                out[:, cp] = self.m - np.bitwise_count(v).astype(np.int64)
                cp += 1
        return out


# ---------------------------------------------------------------------------
# text format


def symbol_width(k: int) -> int:
    width, cap = 1, 36
    while cap < k:
        width += 1
        cap *= 36
    return width


def format_symbols(symbols: Iterable[int], k: int) -> str:
    width = symbol_width(k)
    out = []
    for x in symbols:
        digits = []
        for _ in range(width):
            x, r = divmod(x, 36)
            digits.append(DIGITS[r])
        out.append("".join(reversed(digits)))
    return "".join(out)


def parse_symbols(text: str, k: int) -> SymbolString:
    width = symbol_width(k)
    text = text.strip().lower()
    if len(text) % width:
        raise InvalidInputError(f"line length {len(text)} is not a multiple of symbol width {width}")
    syms = []
    for pos in range(0, len(text), width):
        val = 0
        for ch in text[pos:pos + width]:
            d = DIGITS.find(ch)
            if d < 0:
                raise InvalidInputError(f"invalid base-36 digit {ch!r}")
            val = val * 36 + d
        syms.append(val)
    return SymbolString(tuple(syms), k)


def dumps_strings(strings: Sequence, k: int) -> str:
    lines = [f"k={k}"]
    lines += [format_symbols(_symbols(s), k) for s in strings]
    return "\n".join(lines) + "\n"


def loads_strings(text: str) -> list[SymbolString]:
    lines = text.split("\n")
    if not lines or not lines[0].startswith("k="):
        raise InvalidInputError("missing 'k=<int>' header line")
    k = int(lines[0][2:])
    body = lines[1:]
    if body and body[-1] == "":
        body = body[:-1]
    return [parse_symbols(line, k) for line in body]
