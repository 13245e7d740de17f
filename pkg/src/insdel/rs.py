"""Reed-Solomon codes: encoding, errors-and-erasures decoding, Sudan list decoding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DecodeFailure, InvalidInputError
from .gf import (
    FieldSpec,
    Poly,
    lagrange,
    poly_deg,
    poly_divmod,
    poly_eval,
    poly_eval_many,
    poly_from_roots,
    poly_mul,
    poly_sub,
    poly_trim,
)

ERASED = None


@dataclass(frozen=True)
class RSCodeSpec:
    """Reed-Solomon code of polynomials with degree < ``d``.

    Evaluation points are the first ``n`` field elements in integer order;
    ``n`` defaults to the field order.
    """

    field: FieldSpec
    d: int
    n: int | None = None

    def __post_init__(self):
        n = self.field.q if self.n is None else self.n
        object.__setattr__(self, "n", n)
        if not 1 <= n <= self.field.q:
            raise InvalidInputError(f"block length {n} must be in [1, {self.field.q}]")
        if not 1 <= self.d <= n:
            raise InvalidInputError(f"degree bound {self.d} must be in [1, {n}]")

    @property
    def points(self) -> range:
        return range(self.n)

    @property
    def rate(self) -> float:
        return self.d / self.n


def _check_message(spec: RSCodeSpec, message: Poly) -> Poly:
    msg = poly_trim(spec.field.check(int(c)) for c in message)
    if len(msg) > spec.d:
        raise InvalidInputError(f"message degree {len(msg) - 1} >= degree bound {spec.d}")
    return msg


def rs_encode(spec: RSCodeSpec, message: Poly) -> list[int]:
    """Evaluate the message polynomial at every evaluation point."""
    msg = _check_message(spec, message)
    return poly_eval_many(spec.field, msg, spec.points)


def rs_decode_ee(spec: RSCodeSpec, received: Sequence[int | None]) -> Poly:
    """Errors-and-erasures decoding (Gao's algorithm on the unerased positions).

    ``None`` marks an erased coordinate. Succeeds whenever
    ``2 * errors + erasures < n - d + 1``; otherwise raises :class:`DecodeFailure`
    rather than return a polynomial that is not the unique closest codeword.
    """
    F = spec.field
    if len(received) != spec.n:
        raise InvalidInputError(f"received word has length {len(received)}, expected {spec.n}")
    pts = [(x, F.check(int(y))) for x, y in zip(spec.points, received) if y is not ERASED]
    kept = len(pts)
    if kept < spec.d:
        raise DecodeFailure(f"only {kept} unerased symbols for degree bound {spec.d}")
    budget = (kept - spec.d) // 2
    g0 = poly_from_roots(F, [x for x, _ in pts])
    g1 = lagrange(F, pts)
    # partial extended Euclid on (g0, g1), tracking only the g1 cofactor
    r_prev, r_cur = g0, g1
    v_prev, v_cur = (), (1,)
    while 2 * poly_deg(r_cur) >= kept + spec.d:
        quot, rem = poly_divmod(F, r_prev, r_cur)
        r_prev, r_cur = r_cur, rem
        v_prev, v_cur = v_cur, poly_sub(F, v_prev, poly_mul(F, quot, v_cur))
    if not v_cur:
        raise DecodeFailure("degenerate Euclid cofactor")
    f, rem = poly_divmod(F, r_cur, v_cur)
    if rem or len(f) > spec.d:
        raise DecodeFailure("too many errors for the unique-decoding radius")
    vals = poly_eval_many(F, f, [x for x, _ in pts])
    wrong = sum(v != y for v, (_, y) in zip(vals, pts))
    if wrong > budget:
        raise DecodeFailure("candidate exceeds the error budget")
    return f


# ---------------------------------------------------------------------------
# Sudan list decoding


def sudan_degree(num_points: int, d: int) -> int:
    """Smallest (1, d-1)-weighted degree with more monomials than ``num_points``."""
    w = d - 1
    D = 0
    while _monomial_count(D, w) <= num_points:
        D += 1
    return D


def _monomial_count(D: int, w: int) -> int:
    return sum(D - j * w + 1 for j in range(D // w + 1))


def _monomials(D: int, w: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(D // w + 1) for i in range(D - j * w + 1)]


def _nullspace_vector(F: FieldSpec, mat: np.ndarray) -> np.ndarray:
    """A nonzero solution of ``mat @ x = 0`` (more columns than rank)."""
    mat = mat.copy()
    rows, cols = mat.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(mat[r:, c])[0]
        if not nz.size:
            continue
        piv = r + nz[0]
        if piv != r:
            mat[[r, piv]] = mat[[piv, r]]
        mat[r] = F.vmul(mat[r], F.inv(int(mat[r, c])))
        factors = mat[:, c].copy()
        factors[r] = 0
        mat = F.vsub(mat, F.vmul(factors[:, None], mat[r][None, :]))
        pivots.append(c)
        r += 1
    free = next(c for c in range(cols) if c not in set(pivots))
    sol = np.zeros(cols, dtype=np.int64)
    sol[free] = 1
    for row, c in enumerate(pivots):
        sol[c] = F.neg(int(mat[row, free]))
    return sol


def _bivariate_shift(F: FieldSpec, Q: list[Poly], gamma: int) -> list[Poly]:
    """Coefficients (in y) of Q(x, x*y + gamma), with the largest power of x divided out."""
    out: dict[int, list[int]] = {}
    p = F.p
    for j, qj in enumerate(Q):
        if not qj:
            continue
        for l in range(j + 1):
            binom = math.comb(j, l) % p
            if not binom:
                continue
            coef = F.mul(binom, F.pow(gamma, j - l))
            if not coef:
                continue
            acc = out.setdefault(l, [])
            shifted = [0] * l + [F.mul(c, coef) for c in qj]
            if len(acc) < len(shifted):
                acc.extend([0] * (len(shifted) - len(acc)))
            for i, c in enumerate(shifted):
                acc[i] = F.add(acc[i], c)
    top = max(out, default=-1)
    polys = [poly_trim(out.get(l, ())) for l in range(top + 1)]
    while polys and not polys[-1]:
        polys.pop()
    low = min((next(i for i, c in enumerate(pl) if c) for pl in polys if pl), default=0)
    return [tuple(pl[low:]) for pl in polys]


def _roots_in_field(F: FieldSpec, coeffs: Sequence[int]) -> list[int]:
    coeffs = poly_trim(coeffs)
    if not coeffs:
        return list(F.elements())
    vals = poly_eval_many(F, coeffs, list(F.elements()))
    return [x for x, v in enumerate(vals) if v == 0]


def _roth_ruckenstein(F: FieldSpec, Q: list[Poly], d: int) -> list[Poly]:
    """All polynomials f of degree < d that may satisfy Q(x, f(x)) = 0 (a superset)."""
    found = []

    def recurse(Qc, prefix):
        if len(prefix) == d:
            found.append(poly_trim(prefix))
            return
        at_zero = [pl[0] if pl else 0 for pl in Qc]
        if not any(at_zero):
            return
        for gamma in _roots_in_field(F, at_zero):
            recurse(_bivariate_shift(F, Qc, gamma), prefix + [gamma])

    low = min((next(i for i, c in enumerate(pl) if c) for pl in Q if pl), default=0)
    recurse([tuple(pl[low:]) for pl in Q], [])
    return found


def agreement(F: FieldSpec, poly: Poly, J: Iterable[tuple[int, int]]) -> int:
    """Number of points (a, poly(a)) contained in ``J``."""
    return sum(1 for a, b in set(J) if poly_eval(F, poly, a) == b)


def sudan_list_decode(spec: RSCodeSpec, J: Iterable[tuple[int, int]], threshold: int) -> list[Poly]:
    """Every polynomial of degree < d agreeing with at least ``threshold`` points of ``J``.

    ``J`` is a set of (point, value) pairs, possibly with several values per
    point. The threshold must satisfy ``threshold > sqrt(2 * d * |J|)``.
    """
    F = spec.field
    J = sorted({(F.check(int(a)), F.check(int(b))) for a, b in J})
    d = spec.d
    if threshold * threshold <= 2 * d * len(J):
        raise InvalidInputError(
            f"threshold {threshold} is not above sqrt(2*d*|J|) = {math.sqrt(2 * d * len(J)):.3f}")
    if not J:
        return []
    if d == 1:
        counts: dict[int, int] = {}
        for _, b in J:
            counts[b] = counts.get(b, 0) + 1
        return sorted(poly_trim((b,)) for b, cnt in counts.items() if cnt >= threshold)
    w = d - 1
    D = sudan_degree(len(J), d)
    assert D < threshold, "weighted degree must stay below the agreement threshold"
    monos = _monomials(D, w)
    xs = np.array([a for a, _ in J], dtype=np.int64)
    ys = np.array([b for _, b in J], dtype=np.int64)
    mat = np.zeros((len(J), len(monos)), dtype=np.int64)
    for col, (i, j) in enumerate(monos):
        xi = np.array([F.pow(int(x), i) for x in xs], dtype=np.int64)
        yj = np.array([F.pow(int(y), j) for y in ys], dtype=np.int64)
        mat[:, col] = F.vmul(xi, yj)
    sol = _nullspace_vector(F, mat)
    ydeg = max(j for _, j in monos)
    Q: list[list[int]] = [[0] * (D + 1) for _ in range(ydeg + 1)]
    for (i, j), c in zip(monos, sol.tolist()):
        Q[j][i] = c
    Qp = [poly_trim(row) for row in Q]
    while Qp and not Qp[-1]:
        Qp.pop()
    out = set()
    for cand in _roth_ruckenstein(F, Qp, d):
        if agreement(F, cand, J) >= threshold:
            out.add(cand)
    return sorted(out)


def brute_force_list(spec: RSCodeSpec, J: Iterable[tuple[int, int]], threshold: int) -> list[Poly]:
    """Exhaustive scan of all q^d polynomials (oracle for small fields)."""
    import itertools

    F = spec.field
    J = set(J)
    out = []
    for coeffs in itertools.product(F.elements(), repeat=spec.d):
        poly = poly_trim(coeffs)
        if agreement(F, poly, J) >= threshold:
            out.append(poly)
    return sorted(set(out))
