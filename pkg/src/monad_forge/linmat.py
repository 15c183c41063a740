"""Matrices of homogeneous multigraded forms and their exact linear
algebra: symbolic products, rank at rational points, fiberwise sweeps,
induced maps on global sections, and exact kernel dimensions.

Rank computations over a prime field route through the compiled kernels
when available.  Exact kernels over the rationals use a modular
trivial-kernel certificate first (the rank of an integer matrix can
only drop modulo a prime, so a zero kernel mod p certifies a zero
kernel over Q) and fall back to fraction-free Bareiss elimination.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

import numpy as np

from . import _kernels
from .algebra import (
    DEFAULT_POINT_CAP,
    MultiDegree,
    Polynomial,
    ProjPoint,
    SpaceSpec,
    add_degrees,
    count_points,
    enumerate_points,
    monomial_basis,
    random_point,
)
from .errors import ResourceCapExceeded
from .fields import QQ, PrimeField

DEFAULT_PRIMES = (2_147_483_629, 2_147_483_587)
_CHUNK = 2048
_DENSE_CELL_LIMIT = 4_000_000
_NUMPY_SAFE_MODULUS = 1 << 31

FINITE_FIELD_CAVEAT = (
    "maximal rank checked at rational points of finite fields; "
    "this is evidence, not proof, of an empty degeneracy locus over "
    "the algebraic closure"
)
MONTE_CARLO_CAVEAT = (
    "Monte-Carlo: seeded random points over a large prime field; "
    "a pass is probabilistic evidence only"
)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("MONAD_FORGE_THREADS", "1")))
    except ValueError:
        return 1


class LinMatrix:
    """Matrix whose nonzero entries are homogeneous of one multidegree."""

    __slots__ = ("space", "field", "rows", "cols", "entry_degree", "entries")

    def __init__(self, space: SpaceSpec, field, entry_degree: MultiDegree, entries):
        self.space = space
        self.field = field
        self.entry_degree = space.check_degree(entry_degree)
        grid = tuple(tuple(row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(grid[0])
        for row in grid:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for p in row:
                if not isinstance(p, Polynomial):
                    raise TypeError("entries must be polynomials")
                if p.space != space or p.field != field:
                    raise ValueError("entry lives in a different ring")
                if not p.is_homogeneous_of(self.entry_degree):
                    raise ValueError(
                        f"entry {p!r} is not homogeneous of degree {self.entry_degree}"
                    )
        self.entries = grid
        self.rows = len(grid)
        self.cols = ncols

    @classmethod
    def zero(cls, space, field, entry_degree, rows, cols):
        z = Polynomial.zero(space, field)
        return cls(space, field, entry_degree, [[z] * cols for _ in range(rows)])

    def transpose(self) -> "LinMatrix":
        return LinMatrix(
            self.space,
            self.field,
            self.entry_degree,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def __eq__(self, other):
        return (
            isinstance(other, LinMatrix)
            and self.space == other.space
            and self.field == other.field
            and self.entry_degree == other.entry_degree
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"LinMatrix({self.rows}x{self.cols}, degree {self.entry_degree})"


def mat_mul(b: LinMatrix, a: LinMatrix) -> LinMatrix:
    """Exact symbolic product b*a; entry degrees add."""
    if b.space != a.space or b.field != a.field:
        raise ValueError("matrices live in different rings")
    if b.cols != a.rows:
        raise ValueError(f"shape mismatch: {b.rows}x{b.cols} times {a.rows}x{a.cols}")
    degree = add_degrees(b.entry_degree, a.entry_degree)
    out = []
    for i in range(b.rows):
        row = []
        for j in range(a.cols):
            acc = Polynomial.zero(b.space, b.field)
            for k in range(b.cols):
                acc = acc + b.entries[i][k] * a.entries[k][j]
            row.append(acc)
        out.append(row)
    return LinMatrix(b.space, b.field, degree, out)


def is_zero_matrix(m: LinMatrix) -> bool:
    return all(p.is_zero() for row in m.entries for p in row)


# ---------------------------------------------------------------------------
# pointwise evaluation and rank


def evaluate_at(m: LinMatrix, pt: ProjPoint):
    """Scalar matrix of values at a point, as nested lists."""
    if isinstance(m.field, PrimeField) and m.field != pt.field:
        raise ValueError("cannot evaluate an F_p matrix at a point of another field")
    return [[p.evaluate(pt) for p in row] for row in m.entries]


def _rank_fraction_rows(rows) -> int:
    rows = [[Fraction(v) for v in row] for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = 1 / prow[col]
        for i in range(rank + 1, nrows):
            f = rows[i][col] * inv
            if f:
                rows[i] = [v - f * w for v, w in zip(rows[i], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_at_point(m: LinMatrix, pt: ProjPoint) -> int:
    """Rank of m(pt) by exact elimination over the point's field."""
    values = evaluate_at(m, pt)
    if isinstance(pt.field, PrimeField):
        return _kernels.rank_mod_p(values, pt.field.p)
    return _rank_fraction_rows(values)


def _compiled_entries(m: LinMatrix, p: int):
    """Per entry: list of (coefficient mod p, variable indices with
    multiplicity), for vectorized evaluation."""
    fp = PrimeField(p)
    compiled = []
    for i, row in enumerate(m.entries):
        for j, poly in enumerate(row):
            if poly.is_zero():
                continue
            terms = []
            for mono, coeff in poly.terms.items():
                c = coeff if m.field == fp else fp.of(coeff)
                vars_ = tuple(v for v, e in enumerate(mono) for _ in range(e))
                terms.append((int(c), vars_))
            compiled.append((i, j, terms))
    return compiled


def _evaluate_batch(compiled, shape, coords: np.ndarray, p: int) -> np.ndarray:
    npts = coords.shape[0]
    out = np.zeros((npts, shape[0], shape[1]), dtype=np.int64)
    for i, j, terms in compiled:
        acc = np.zeros(npts, dtype=np.int64)
        for coeff, vars_ in terms:
            t = np.full(npts, coeff % p, dtype=np.int64)
            for v in vars_:
                t = (t * coords[:, v]) % p
            acc = (acc + t) % p
        out[:, i, j] = acc
    return out


def _chunked(seq, size):
    buf = []
    for item in seq:
        buf.append(item)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


@dataclass(frozen=True)
class ExhaustiveStrategy:
    """Visit every rational point of X(F_q) for each listed prime q."""

    qs: tuple[int, ...]
    cap: int = DEFAULT_POINT_CAP

    def describe(self) -> dict:
        return {"kind": "exhaustive", "qs": list(self.qs), "cap": self.cap}


@dataclass(frozen=True)
class SampledStrategy:
    """Seeded random points over F_prime (Mersenne Twister stream)."""

    count: int
    seed: int
    prime: int = 2_147_483_647

    def describe(self) -> dict:
        return {
            "kind": "sampled",
            "count": self.count,
            "seed": self.seed,
            "prime": self.prime,
        }


@dataclass
class RankReport:
    expected_rank: int
    strategy: dict
    checked: int
    failures: list
    verdict: str
    caveat: str

    def to_dict(self) -> dict:
        return {
            "expected_rank": self.expected_rank,
            "strategy": self.strategy,
            "checked": self.checked,
            "failures": self.failures,
            "verdict": self.verdict,
            "caveat": self.caveat,
        }


def _sweep_ranks(m: LinMatrix, points, p: int):
    """Yield (point_blocks, rank) over an iterable of points of F_p."""
    compiled = _compiled_entries(m, p)
    shape = (m.rows, m.cols)
    use_numpy = p < _NUMPY_SAFE_MODULUS

    def run_chunk(chunk):
        if use_numpy:
            coords = np.array([pt.coords_flat() for pt in chunk], dtype=np.int64)
            mats = _evaluate_batch(compiled, shape, coords, p)
            ranks = _kernels.batch_rank_mod_p(mats, p)
        else:
            ranks = [rank_at_point(m, pt) for pt in chunk]
        return [(pt.blocks, r) for pt, r in zip(chunk, ranks)]

    chunks = _chunked(points, _CHUNK)
    workers = thread_count()
    if workers == 1:
        for chunk in chunks:
            yield from run_chunk(chunk)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(run_chunk, chunks):
                yield from result


def fiberwise_rank_check(
    m: LinMatrix, expected: int, strategy
) -> RankReport:
    """Check that m has the expected rank at many rational points.

    An exhaustive pass means "maximal rank at all rational points of the
    listed fields"; a sampled pass is Monte-Carlo evidence only.  Either
    way the report carries the appropriate caveat.
    """
    if expected > min(m.rows, m.cols):
        raise ValueError("expected rank exceeds the matrix dimensions")
    failures = []
    checked = 0
    if isinstance(strategy, ExhaustiveStrategy):
        if not strategy.qs:
            raise ValueError("exhaustive strategy needs at least one field")
        for q in strategy.qs:
            total = count_points(m.space, q)
            if total > strategy.cap:
                raise ResourceCapExceeded(
                    f"{total} points on {m.space}(F_{q}) exceeds cap {strategy.cap}"
                )
            pts = enumerate_points(m.space, q, cap=strategy.cap)
            for blocks, r in _sweep_ranks(m, pts, q):
                checked += 1
                if r != expected:
                    failures.append(
                        {"q": q, "blocks": [list(b) for b in blocks], "rank": r}
                    )
        caveat = FINITE_FIELD_CAVEAT
    elif isinstance(strategy, SampledStrategy):
        import random

        field = PrimeField(strategy.prime)
        rng = random.Random(strategy.seed)
        pts = (random_point(m.space, field, rng) for _ in range(strategy.count))
        for blocks, r in _sweep_ranks(m, pts, strategy.prime):
            checked += 1
            if r != expected:
                failures.append(
                    {
                        "q": strategy.prime,
                        "blocks": [list(b) for b in blocks],
                        "rank": r,
                    }
                )
        caveat = MONTE_CARLO_CAVEAT
    else:
        raise TypeError(f"unknown strategy {strategy!r}")
    failures.sort(key=lambda f: (f["q"], f["blocks"]))
    verdict = "pass" if not failures else "fail"
    return RankReport(
        expected_rank=expected,
        strategy=strategy.describe(),
        checked=checked,
        failures=failures,
        verdict=verdict,
        caveat=caveat,
    )


# ---------------------------------------------------------------------------
# induced maps on global sections, exact kernels


@dataclass
class SparseIntMatrix:
    """Coordinate-list integer matrix; modulus marks an F_p matrix."""

    rows: int
    cols: int
    entries: dict = dc_field(default_factory=dict)
    modulus: int | None = None

    def set(self, i: int, j: int, v: int):
        if v:
            self.entries[(i, j)] = v
        else:
            self.entries.pop((i, j), None)

    def add_to(self, i: int, j: int, v: int):
        cur = self.entries.get((i, j), 0) + v
        if self.modulus:
            cur %= self.modulus
        self.set(i, j, cur)

    def to_dense_rows(self) -> list[list[int]]:
        rows = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def to_numpy_mod(self, p: int) -> np.ndarray:
        arr = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (i, j), v in self.entries.items():
            arr[i, j] = v % p
        return arr

    def columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows or self.modulus != other.modulus:
            raise ValueError("incompatible matrices")
        out = SparseIntMatrix(self.rows, other.cols, modulus=self.modulus)
        by_row: dict = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(k, []).append((i, v))
        for (k, j), w in other.entries.items():
            for i, v in by_row.get(k, ()):
                out.add_to(i, j, v * w)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseIntMatrix)
            and (self.rows, self.cols, self.modulus)
            == (other.rows, other.cols, other.modulus)
            and self.entries == other.entries
        )


def global_sections_map(m: LinMatrix, twist: MultiDegree) -> SparseIntMatrix:
    """Matrix of the induced map on global sections.

    Maps H0(O(twist))^cols to H0(O(twist + entry_degree))^rows in the
    canonical monomial bases; shape is (target dimension) x (domain
    dimension).  Over the rationals each column of m is scaled by the
    lcm of its coefficient denominators (the kernel and rank are
    unchanged), so the result is always an integer matrix.
    """
    space = m.space
    twist = space.check_degree(twist)
    dom = monomial_basis(space, twist)
    tgt = monomial_basis(space, add_degrees(twist, m.entry_degree))
    tgt_index = {mono: k for k, mono in enumerate(tgt)}
    modulus = m.field.p if isinstance(m.field, PrimeField) else None
    out = SparseIntMatrix(
        m.rows * len(tgt), m.cols * len(dom), modulus=modulus
    )
    if not dom:
        return out
    for j in range(m.cols):
        if modulus is None:
            den = lcm(
                *(
                    coeff.denominator
                    for i in range(m.rows)
                    for coeff in m.entries[i][j].terms.values()
                ),
                1,
            )
        for i in range(m.rows):
            for mono, coeff in m.entries[i][j].terms.items():
                c = int(coeff) if modulus else int(coeff * den)
                for u_idx, u in enumerate(dom):
                    target = tuple(a + b for a, b in zip(mono, u))
                    out.add_to(
                        i * len(tgt) + tgt_index[target],
                        j * len(dom) + u_idx,
                        c,
                    )
    return out


def bareiss_rank(rows) -> int:
    """Rank of an integer matrix by one-step fraction-free elimination."""
    rows = [list(map(int, r)) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pval = rows[rank][col]
        prow = rows[rank]
        for i in range(rank + 1, nrows):
            f = rows[i][col]
            ri = rows[i]
            if f:
                for j in range(col + 1, ncols):
                    ri[j] = (pval * ri[j] - f * prow[j]) // prev
            elif prev != 1 and pval != prev:
                for j in range(col + 1, ncols):
                    ri[j] = (pval * ri[j]) // prev
            elif pval != prev:
                for j in range(col + 1, ncols):
                    ri[j] = (pval * ri[j]) // prev
            ri[col] = 0
        prev = pval
        rank += 1
        if rank == nrows:
            break
    return rank


def sparse_rank_mod_p(columns: list[dict], p: int) -> int:
    """Rank over F_p of a matrix given as per-column {row: value} dicts.

    Left-looking elimination: each new column is reduced against the
    stored pivot columns in discovery order, which keeps every stored
    pivot column free of earlier pivot rows.
    """
    pivots: list[tuple[int, dict]] = []
    pivot_rows: set[int] = set()
    for col in columns:
        vec = {r: v % p for r, v in col.items() if v % p}
        for prow, pcol in pivots:
            f = vec.get(prow)
            if not f:
                continue
            for rr, vv in pcol.items():
                nv = (vec.get(rr, 0) - f * vv) % p
                if nv:
                    vec[rr] = nv
                else:
                    vec.pop(rr, None)
        if vec:
            prow = min(vec)
            inv = pow(vec[prow], -1, p)
            pivots.append((prow, {rr: (inv * vv) % p for rr, vv in vec.items()}))
            pivot_rows.add(prow)
    return len(pivots)


def _rank_mod(mat: SparseIntMatrix, p: int) -> int:
    if mat.rows * mat.cols <= _DENSE_CELL_LIMIT and p < _NUMPY_SAFE_MODULUS:
        return _kernels.rank_mod_p(mat.to_numpy_mod(p), p)
    return sparse_rank_mod_p(mat.columns(), p)


def kernel_dim(mat: SparseIntMatrix, primes: tuple[int, ...] = DEFAULT_PRIMES) -> int:
    """Dimension of the right kernel, exact over the base field.

    Integer matrices are treated over Q: a zero kernel modulo a prime
    certifies a zero kernel over Q; otherwise fraction-free elimination
    gives the exact answer.  F_p matrices get a single exact elimination.
    """
    if mat.cols == 0:
        return 0
    if mat.modulus is not None:
        return mat.cols - _rank_mod(mat, mat.modulus)
    if not mat.entries:
        return mat.cols
    for p in primes:
        if mat.cols - _rank_mod(mat, p) == 0:
            return 0
    return mat.cols - bareiss_rank(mat.to_dense_rows())


def exact_rank(mat: SparseIntMatrix) -> int:
    """Rank over the base field (Q for integer matrices, else F_p)."""
    if mat.modulus is not None:
        return _rank_mod(mat, mat.modulus)
    if not mat.entries:
        return 0
    r = _rank_mod(mat, DEFAULT_PRIMES[0])
    if r == min(mat.rows, mat.cols):
        return r
    return bareiss_rank(mat.to_dense_rows())


def nullity_int_rows(rows, ncols: int, modulus: int | None = None) -> int:
    """Right-kernel dimension of a small dense integer matrix."""
    if ncols == 0:
        return 0
    if not rows:
        return ncols
    if modulus is not None:
        return ncols - _kernels.rank_mod_p(rows, modulus)
    for p in DEFAULT_PRIMES:
        reduced = [[v % p for v in row] for row in rows]
        if ncols - _kernels.rank_mod_p(reduced, p) == 0:
            return 0
    return ncols - bareiss_rank(rows)
