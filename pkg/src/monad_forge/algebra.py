"""Multigraded monomial and polynomial arithmetic on products of
projective spaces.

The ambient space is a product P^{a_1} x ... x P^{a_n}.  Its coordinate
ring is graded by Z^n: block i contributes a_i + 1 variables and the
i-th component of a monomial's multidegree is the sum of that block's
exponents.  Monomials are flat exponent tuples over all variables,
blocks concatenated in factor order.

Canonical monomial order: descending lexicographic on the concatenated
exponent vector.  On a single P^a in degree 1 this lists the variables
x_0, ..., x_a in order, and on (P^1)^m in multidegree (1,...,1) the
position of a monomial read in binary (first factor = most significant
bit, digit 1 = second variable of the block) equals its index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, prod
from typing import Iterator

from .errors import ResourceCapExceeded
from .fields import QQ, PrimeField, Rationals, is_prime

MultiDegree = tuple[int, ...]
Monomial = tuple[int, ...]

DEFAULT_POINT_CAP = 2_000_000


@dataclass(frozen=True)
class SpaceSpec:
    """A product of projective spaces, given by the factor dimensions."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(a) for a in self.factor_dims)
        object.__setattr__(self, "factor_dims", dims)
        if len(dims) < 1 or any(a < 1 for a in dims):
            raise ValueError("need at least one factor, every dimension >= 1")

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    @property
    def dim(self) -> int:
        return sum(self.factor_dims)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(a + 1 for a in self.factor_dims)

    @property
    def n_vars(self) -> int:
        return sum(self.block_sizes)

    def block_start(self, i: int) -> int:
        return sum(self.block_sizes[:i])

    def var_index(self, block: int, j: int) -> int:
        if not (0 <= j <= self.factor_dims[block]):
            raise ValueError(f"variable {j} out of range for block {block}")
        return self.block_start(block) + j

    def check_degree(self, d: MultiDegree) -> MultiDegree:
        d = tuple(int(c) for c in d)
        if len(d) != self.n_factors:
            raise ValueError(
                f"degree {d} has {len(d)} components, space has "
                f"{self.n_factors} factors"
            )
        return d

    def multidegree_of(self, mono: Monomial) -> MultiDegree:
        out = []
        pos = 0
        for size in self.block_sizes:
            out.append(sum(mono[pos : pos + size]))
            pos += size
        return tuple(out)

    def var_name(self, v: int) -> str:
        pos = 0
        for i, size in enumerate(self.block_sizes):
            if v < pos + size:
                if self.n_factors == 1:
                    return f"x{v - pos}"
                return f"x{i}_{v - pos}"
            pos += size
        raise ValueError(f"variable index {v} out of range")

    def __repr__(self):
        return "P" + "xP".join(str(a) for a in self.factor_dims)


def add_degrees(d: MultiDegree, e: MultiDegree) -> MultiDegree:
    return tuple(a + b for a, b in zip(d, e, strict=True))


def negate_degree(d: MultiDegree) -> MultiDegree:
    return tuple(-a for a in d)


def scale_degree(k: int, d: MultiDegree) -> MultiDegree:
    return tuple(k * a for a in d)


def _block_exponents(nvars: int, total: int) -> Iterator[tuple[int, ...]]:
    # Exponent vectors of fixed total, descending lex.
    if nvars == 1:
        yield (total,)
        return
    for e0 in range(total, -1, -1):
        for rest in _block_exponents(nvars - 1, total - e0):
            yield (e0,) + rest


def monomial_basis(space: SpaceSpec, d: MultiDegree) -> list[Monomial]:
    """All monomials of multidegree d, in the canonical order.

    Empty when any component of d is negative.  The size for a
    nonnegative d is prod_i C(a_i + d_i, a_i).
    """
    d = space.check_degree(d)
    if any(c < 0 for c in d):
        return []
    per_block = [
        list(_block_exponents(size, c))
        for size, c in zip(space.block_sizes, d)
    ]
    return [sum(combo, ()) for combo in product(*per_block)]


def monomial_count(space: SpaceSpec, d: MultiDegree) -> int:
    d = space.check_degree(d)
    if any(c < 0 for c in d):
        return 0
    return prod(comb(a + c, a) for a, c in zip(space.factor_dims, d))


class Polynomial:
    """Sparse multigraded polynomial over F_p or the rationals.

    Terms map flat exponent tuples to nonzero coefficients.  Arithmetic
    is exact; operands must live on the same space over the same field.
    """

    __slots__ = ("space", "field", "terms")

    def __init__(self, space: SpaceSpec, field, terms: dict | None = None):
        self.space = space
        self.field = field
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = field.of(coeff)
                if coeff != field.zero:
                    clean[tuple(mono)] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, space: SpaceSpec, field=QQ) -> "Polynomial":
        return cls(space, field)

    @classmethod
    def constant(cls, space: SpaceSpec, value, field=QQ) -> "Polynomial":
        return cls(space, field, {(0,) * space.n_vars: value})

    @classmethod
    def monomial(cls, space: SpaceSpec, expts, coeff=1, field=QQ) -> "Polynomial":
        expts = tuple(int(e) for e in expts)
        if len(expts) != space.n_vars or any(e < 0 for e in expts):
            raise ValueError("bad exponent vector")
        return cls(space, field, {expts: coeff})

    @classmethod
    def variable(cls, space: SpaceSpec, block: int, j: int, field=QQ) -> "Polynomial":
        expts = [0] * space.n_vars
        expts[space.var_index(block, j)] = 1
        return cls(space, field, {tuple(expts): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def multidegree(self) -> MultiDegree | None:
        """The common multidegree of all terms, or None if mixed/zero."""
        degs = {self.space.multidegree_of(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous_of(self, d: MultiDegree) -> bool:
        if not self.terms:
            return True
        return self.multidegree() == tuple(d)

    def _check_ring(self, other: "Polynomial"):
        if self.space != other.space or self.field != other.field:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        terms = dict(self.terms)
        f = self.field
        for mono, coeff in other.terms.items():
            s = f.add(terms.get(mono, f.zero), coeff)
            if s == f.zero:
                terms.pop(mono, None)
            else:
                terms[mono] = s
        out = Polynomial.__new__(Polynomial)
        out.space, out.field, out.terms = self.space, f, terms
        return out

    def __neg__(self) -> "Polynomial":
        f = self.field
        out = Polynomial.__new__(Polynomial)
        out.space, out.field = self.space, f
        out.terms = {m: f.neg(c) for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        f = self.field
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = f.add(terms.get(mono, f.zero), f.mul(c1, c2))
                if s == f.zero:
                    terms.pop(mono, None)
                else:
                    terms[mono] = s
        out = Polynomial.__new__(Polynomial)
        out.space, out.field, out.terms = self.space, f, terms
        return out

    def scaled(self, c) -> "Polynomial":
        f = self.field
        return Polynomial(self.space, f, {m: f.mul(co, f.of(c)) for m, co in self.terms.items()})

    def map_variables(self, images: list["Polynomial"]) -> "Polynomial":
        """Ring-morphism substitution: variable v goes to images[v]."""
        if len(images) != self.space.n_vars:
            raise ValueError("need one image per variable")
        target = images[0]
        result = Polynomial.zero(target.space, target.field)
        for mono, coeff in self.terms.items():
            term = Polynomial.constant(target.space, coeff, target.field)
            for v, e in enumerate(mono):
                for _ in range(e):
                    term = term * images[v]
            result = result + term
        return result

    def evaluate(self, pt: "ProjPoint"):
        """Value at a point; coefficients are embedded into the point's
        field when the fields differ (rationals into F_p)."""
        coords = pt.coords_flat()
        if len(coords) != self.space.n_vars:
            raise ValueError("point does not match the space")
        f = pt.field
        total = f.zero
        for mono, coeff in self.terms.items():
            v = f.of(coeff) if f != self.field else coeff
            for i, e in enumerate(mono):
                if e:
                    c = coords[i]
                    for _ in range(e):
                        v = f.mul(v, c)
            total = f.add(total, v)
        return total

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.space == other.space
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.space, self.field, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            coeff = self.terms[mono]
            factors = [
                self.space.var_name(v) + (f"^{e}" if e > 1 else "")
                for v, e in enumerate(mono)
                if e
            ]
            body = "*".join(factors) if factors else "1"
            if coeff == self.field.one:
                parts.append(body)
            elif coeff == self.field.of(-1):
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


@dataclass(frozen=True)
class ProjPoint:
    """A rational point of the product, one coordinate block per factor."""

    blocks: tuple[tuple, ...]
    field: PrimeField | Rationals

    def __post_init__(self):
        blocks = tuple(tuple(self.field.of(c) for c in b) for b in self.blocks)
        if any(all(c == self.field.zero for c in b) for b in blocks):
            raise ValueError("each block of a projective point must be nonzero")
        object.__setattr__(self, "blocks", blocks)

    def coords_flat(self) -> tuple:
        return tuple(c for b in self.blocks for c in b)

    def normalized(self) -> "ProjPoint":
        """Scale each block so its first nonzero coordinate is 1."""
        out = []
        for b in self.blocks:
            lead = next(c for c in b if c != self.field.zero)
            inv = self.field.inv(lead)
            out.append(tuple(self.field.mul(inv, c) for c in b))
        return ProjPoint(tuple(out), self.field)

    def rescaled(self, factors) -> "ProjPoint":
        """Multiply block i by factors[i] (each nonzero)."""
        out = tuple(
            tuple(self.field.mul(self.field.of(lam), c) for c in b)
            for lam, b in zip(factors, self.blocks, strict=True)
        )
        return ProjPoint(out, self.field)


def _proj_space_points(a: int, q: int) -> list[tuple[int, ...]]:
    # Normalized representatives of P^a(F_q): leading zeros, then a 1,
    # then arbitrary residues.
    pts = []
    for lead in range(a + 1):
        for tail in product(range(q), repeat=a - lead):
            pts.append((0,) * lead + (1,) + tail)
    return pts


def count_points(space: SpaceSpec, q: int) -> int:
    return prod((q ** (a + 1) - 1) // (q - 1) for a in space.factor_dims)


def enumerate_points(
    space: SpaceSpec, q: int, cap: int = DEFAULT_POINT_CAP
) -> Iterator[ProjPoint]:
    """All F_q-rational points, each block normalized, no duplicates."""
    if not is_prime(q):
        raise ValueError(f"point enumeration needs a prime field, got q={q}")
    total = count_points(space, q)
    if total > cap:
        raise ResourceCapExceeded(
            f"{total} points on {space}(F_{q}) exceeds the cap of {cap}"
        )
    field = PrimeField(q)
    per_block = [_proj_space_points(a, q) for a in space.factor_dims]
    for blocks in product(*per_block):
        yield ProjPoint(tuple(blocks), field)


def random_point(space: SpaceSpec, field: PrimeField, rng) -> ProjPoint:
    """A uniformly random point with every block nonzero."""
    blocks = []
    for a in space.factor_dims:
        while True:
            b = tuple(rng.randrange(field.p) for _ in range(a + 1))
            if any(b):
                break
        blocks.append(b)
    return ProjPoint(tuple(blocks), field)


def to_fraction(value) -> Fraction:
    return Fraction(value)
