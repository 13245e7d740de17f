"""Budget sweeps: corrupt random codewords, decode, count exact recoveries."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import highrate, listconcat
from .channel import STRATEGIES, corrupt
from .errors import InsdelError, InvalidInputError
from .gf import Poly
from .rs import rs_encode
from .seqkit import _symbols

REGIMES = ("highrate", "highnoise", "kary", "custom")
COLUMNS = ("regime", "params", "budget_fraction", "strategy", "trials", "successes", "mean_decode_ms")


@dataclass
class Codec:
    """Uniform view of a code for sweeps, the CLI and tests."""

    spec: object
    name: str

    @property
    def is_highrate(self) -> bool:
        return isinstance(self.spec, highrate.HighRateSpec)

    @property
    def length(self) -> int:
        return self.spec.length

    @property
    def k(self) -> int:
        return 2 if self.is_highrate else self.spec.k

    def params(self) -> str:
        s = self.spec
        if self.is_highrate:
            items = dict(q=s.q, h=s.h, d=s.d, delta=s.delta, m=s.m, theta_buf=s.theta_buf)
        else:
            items = dict(q=s.q, d=s.outer.d, delta=s.delta, gamma=s.gamma, m=s.m, k=s.k)
        return ";".join(f"{k}={v}" for k, v in items.items())

    def random_message(self, rng) -> Poly:
        mod = highrate if self.is_highrate else listconcat
        return mod.random_message(self.spec, rng)

    def encode(self, message: Poly):
        if self.is_highrate:
            return highrate.hr_encode(self.spec, message)
        return listconcat.concat_encode(self.spec, message)

    def decode(self, s, memo: dict | None = None) -> Poly:
        if self.is_highrate:
            return highrate.hr_decode(self.spec, s, memo)
        return listconcat.list_concat_decode(self.spec, s)

    def design_budget(self) -> int:
        if self.is_highrate:
            return highrate.design_budget(self.spec)
        return self.spec.budget

    def probe(self, message: Poly, memo: dict) -> Callable[[tuple], float]:
        """Damage score for greedy corruption: higher means closer to a decoding failure."""
        spec = self.spec
        if self.is_highrate:
            def score(s):
                trace = highrate.hr_decode_trace(spec, s, memo)
                errors, erasures = highrate.outer_damage(spec, message, trace)
                return float(2 * errors + erasures)
            return score
        truth = rs_encode(spec.outer, message)

        def score(s):
            J = listconcat.window_sweep(spec, s)
            hits = sum((i, v) in J for i, v in enumerate(truth))
            return float(len(J) - 2 * hits)
        return score


@dataclass
class ExperimentConfig:
    regime: str
    params: dict
    budget_fracs: Sequence[float]
    trials: int
    strategies: Sequence[str]
    seed: int
    out: Path | None = None
    timing: bool = False

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise InvalidInputError(f"unknown regime {self.regime!r}")
        if any(not 0 <= f <= 2 for f in self.budget_fracs):
            raise InvalidInputError("budget fractions must lie in [0, 2]")
        if self.trials < 1:
            raise InvalidInputError("trials must be positive")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise InvalidInputError(f"unknown strategy {s!r}")


def trial_seed(root: int, point: int, trial: int) -> int:
    return int(np.random.SeedSequence([root, point, trial]).generate_state(1)[0])


def run_point(codec: Codec, budget: int, strategy: str, trials: int, root_seed: int, point: int,
              timing: bool = False, on_trial: Callable | None = None) -> tuple[int, float | None]:
    successes = 0
    elapsed = 0.0
    layout = codec.spec.layout()
    for t in range(trials):
        seed = trial_seed(root_seed, point, t)
        rng = np.random.default_rng(seed)
        message = codec.random_message(rng)
        c = codec.encode(message)
        memo: dict = {}
        probe = codec.probe(message, memo) if strategy == "greedy" else None
        s, plan = corrupt(c, budget, strategy, seed, layout=layout, probe=probe, k=codec.k)
        start = time.perf_counter()
        try:
            decoded = codec.decode(s, memo)
        except InsdelError:
            decoded = None
        elapsed += time.perf_counter() - start
        ok = decoded == message
        successes += ok
        if on_trial is not None:
            on_trial(message, c, s, plan, decoded)
    return successes, (1000 * elapsed / trials if timing else None)


def run_experiment(config: ExperimentConfig, codec: Codec) -> list[dict]:
    rows = []
    point = 0
    for frac in config.budget_fracs:
        budget = int(Fraction(frac).limit_denominator(10**6) * codec.length)
        for strategy in config.strategies:
            ok, ms = run_point(codec, budget, strategy, config.trials, config.seed, point, config.timing)
            rows.append({
                "regime": config.regime,
                "params": codec.params(),
                "budget_fraction": f"{frac:g}",
                "strategy": strategy,
                "trials": config.trials,
                "successes": ok,
                "mean_decode_ms": "" if ms is None else f"{ms:.3f}",
            })
            point += 1
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_results(rows: Sequence[dict], out: Path, plot: bool = True) -> None:
    out = Path(out)
    out.write_text(rows_to_csv(rows))
    if plot:
        from .plotting import plot_success

        plot_success(rows, out.with_suffix(".png"))
