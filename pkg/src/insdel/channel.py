"""Budgeted insertion/deletion corruption, random and adversarial.

Every strategy emits an ordered edit script whose length never exceeds the
budget; positions refer to the string as it stands when the edit is applied.
The insdel distance between source and output is re-checked before return.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidInputError
from .seqkit import SymbolString, _alphabet_of, _symbols, insdel_distance

STRATEGIES = ("uniform", "buffer_spoof", "chunk_kill", "block_shift", "greedy")

Edit = tuple  # ("D", pos) or ("I", pos, symbol)


@dataclass(frozen=True)
class Layout:
    """Where the inner words and zero chunks sit inside a clean codeword."""

    blocks: Sequence[tuple[int, int]]
    chunks: Sequence[tuple[int, int]] = ()
    k: int = 2
    buffer_len: int = 0
    kill_ones: int = 1


@dataclass
class CorruptionPlan:
    edits: list[Edit]
    budget: int
    strategy: str
    seed: int

    def apply(self, c) -> tuple:
        return apply_edits(c, self.edits)

    def dumps(self) -> str:
        lines = [f"# strategy={self.strategy}", f"# budget={self.budget}", f"# seed={self.seed}"]
        for e in self.edits:
            lines.append(f"D {e[1]}" if e[0] == "D" else f"I {e[1]} {e[2]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "CorruptionPlan":
        meta = {"strategy": "replay", "budget": None, "seed": 0}
        edits: list[Edit] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                if key in meta:
                    meta[key] = val
                continue
            parts = line.split()
            try:
                if parts[0] == "D" and len(parts) == 2:
                    edits.append(("D", int(parts[1])))
                elif parts[0] == "I" and len(parts) == 3:
                    edits.append(("I", int(parts[1]), int(parts[2])))
                else:
                    raise ValueError
            except ValueError:
                raise InvalidInputError(f"malformed edit line {line!r}") from None
        budget = len(edits) if meta["budget"] is None else int(meta["budget"])
        return cls(edits, budget, meta["strategy"], int(meta["seed"]))


def apply_edits(c, edits: Sequence[Edit]) -> tuple:
    out = list(_symbols(c))
    for e in edits:
        if e[0] == "D":
            if not 0 <= e[1] < len(out):
                raise InvalidInputError(f"deletion at {e[1]} outside string of length {len(out)}")
            del out[e[1]]
        elif e[0] == "I":
            if not 0 <= e[1] <= len(out):
                raise InvalidInputError(f"insertion at {e[1]} outside string of length {len(out)}")
            out.insert(e[1], e[2])
        else:
            raise InvalidInputError(f"unknown edit {e!r}")
    return tuple(out)


def verify_budget(c, s, budget: int) -> bool:
    return insdel_distance(c, s) <= budget


# ---------------------------------------------------------------------------
# working string that remembers where each symbol came from


class _Work:
    def __init__(self, c: tuple):
        self.syms = list(c)
        self.orig = list(range(len(c)))
        self.edits: list[Edit] = []

    def copy(self) -> "_Work":
        w = _Work(())
        w.syms, w.orig, w.edits = list(self.syms), list(self.orig), list(self.edits)
        return w

    def delete(self, pos: int):
        del self.syms[pos]
        del self.orig[pos]
        self.edits.append(("D", pos))

    def insert(self, pos: int, sym: int):
        self.syms.insert(pos, sym)
        self.orig.insert(pos, -1)
        self.edits.append(("I", pos, sym))

    def positions(self, span: tuple[int, int]) -> list[int]:
        a, b = span
        return [p for p, o in enumerate(self.orig) if a <= o < b]


def _uniform(work: _Work, rng, allot: int, layout: Layout | None, k: int) -> int:
    for _ in range(allot):
        if work.syms and rng.random() < 0.5:
            work.delete(int(rng.integers(len(work.syms))))
        else:
            work.insert(int(rng.integers(len(work.syms) + 1)), int(rng.integers(k)))
    return allot


def _buffer_spoof(work: _Work, rng, allot: int, layout: Layout, k: int) -> int:
    """Grow the longest zero run inside a random inner word up to the buffer length."""
    pos = work.positions(layout.blocks[int(rng.integers(len(layout.blocks)))])
    if not pos:
        return _uniform(work, rng, min(allot, 1), layout, k)
    best_at, best_len, run_at, run = pos[0], 0, pos[0], 0
    for p in pos:
        if work.syms[p] == 0:
            if run == 0:
                run_at = p
            run += 1
            if run > best_len:
                best_at, best_len = run_at, run
        else:
            run = 0
    need = max(1, layout.buffer_len - best_len)
    use = min(need, allot)
    for _ in range(use):
        work.insert(best_at, 0)
    return use


def _chunk_kill(work: _Work, rng, allot: int, layout: Layout, k: int) -> int:
    """Break a zero chunk with evenly spaced ones (or hit a block boundary without chunks)."""
    if not layout.chunks:
        return _block_shift(work, rng, allot, layout, k)
    pos = work.positions(layout.chunks[int(rng.integers(len(layout.chunks)))])
    if not pos:
        return 0
    use = min(layout.kill_ones, allot)
    for r in range(use):
        at = pos[0] + ((r + 1) * len(pos)) // (use + 1) + r
        work.insert(min(at, len(work.syms)), 1)
    return use


def _block_shift(work: _Work, rng, allot: int, layout: Layout, k: int) -> int:
    """Delete the head of one block and insert the same number of garbage symbols into another."""
    nb = len(layout.blocks)
    i = int(rng.integers(nb))
    j = int(rng.integers(nb - 1)) if nb > 1 else 0
    if nb > 1 and j >= i:
        j += 1
    m = layout.blocks[i][1] - layout.blocks[i][0]
    x = max(1, min(allot // 2, max(1, m // 2)))
    src = work.positions(layout.blocks[i])[:x]
    used = 0
    for p in reversed(src):
        if used == allot:
            break
        work.delete(p)
        used += 1
    dst = work.positions(layout.blocks[j])
    while used < allot and used < 2 * x:
        at = dst[int(rng.integers(len(dst)))] if dst else int(rng.integers(len(work.syms) + 1))
        work.insert(at, int(rng.integers(k)))
        used += 1
        dst = work.positions(layout.blocks[j])
    return used


_MOVES = {
    "uniform": _uniform,
    "buffer_spoof": _buffer_spoof,
    "chunk_kill": _chunk_kill,
    "block_shift": _block_shift,
}


def _run(work: _Work, rng, move, budget: int, layout: Layout | None, k: int):
    remaining = budget
    while remaining > 0:
        used = move(work, rng, remaining, layout, k)
        if used <= 0:
            break
        remaining -= used


def corrupt(c, budget: int, strategy: str = "uniform", seed: int = 0, *,
            layout: Layout | None = None, probe: Callable[[tuple], float] | None = None,
            k: int | None = None, rounds: int = 8, proposals: int = 4) -> tuple[SymbolString, CorruptionPlan]:
    """Corrupt ``c`` with at most ``budget`` insertions and deletions.

    ``probe`` scores a candidate output (higher means more damage to the
    decoder); only the greedy strategy consults it. Layout-aware strategies
    need ``layout``.
    """
    if budget < 0:
        raise InvalidInputError("budget must be non-negative")
    if strategy not in STRATEGIES:
        raise InvalidInputError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    c_sym = _symbols(c)
    k = k or _alphabet_of(c) or (layout.k if layout else None) or max(2, max(c_sym, default=1) + 1)
    if strategy not in ("uniform",) and layout is None:
        raise InvalidInputError(f"strategy {strategy!r} needs a codeword layout")
    rng = np.random.default_rng([seed, STRATEGIES.index(strategy)])
    work = _Work(c_sym)
    if strategy == "greedy":
        score = probe or (lambda s: float(insdel_distance(c_sym, s)))
        remaining = budget
        moves = list(_MOVES.values())
        for r in range(rounds):
            if remaining <= 0:
                break
            allot = max(1, remaining // (rounds - r))
            best, best_score = None, None
            for _ in range(proposals):
                trial = work.copy()
                move = moves[int(rng.integers(len(moves)))]
                _run(trial, rng, move, allot, layout, k)
                val = score(tuple(trial.syms))
                if best_score is None or val > best_score:
                    best, best_score = trial, val
            remaining -= len(best.edits) - len(work.edits)
            work = best
    elif budget:
        _run(work, rng, _MOVES[strategy], budget, layout, k)
    out = tuple(work.syms)
    plan = CorruptionPlan(work.edits, budget, strategy, seed)
    if len(plan.edits) > budget or not verify_budget(c_sym, out, budget):
        raise AssertionError("corruption exceeded its budget")
    return SymbolString(out, k), plan
