"""Hermitian lattices over imaginary quadratic fields.

Free modules over the ring of integers of Q(sqrt(-d)) carrying a
conjugate-symmetric positive definite Gram matrix (hermitian scalar product
left antilinear).  Degrees land in LogRational via deg = -log(det Gram) for
the single complex place.  The reproduction routines rebuild the explicit
rank-2/3 computations the counterexample constructions rest on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactval import LogRational, half_log, log_of_rational
from .lattice import EuclideanLattice
from .report import Report, SCOPE_NOTE

F = Fraction

Rat = int | Fraction

def _is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    from .exactval import factor_positive_int

    return all(e == 1 for e in factor_positive_int(d).values())


class ImagQuadField:
    """Q(sqrt(-d)) with ring of integers Z[omega]."""

    __slots__ = ("d", "omega_trace", "omega_norm")

    def __init__(self, d: int):
        if not _is_squarefree(d):
            raise ValueError(f"d must be a squarefree positive integer, got {d}")
        object.__setattr__(self, "d", d)
        if (-d) % 4 == 1:  # omega = (1+sqrt(-d))/2
            object.__setattr__(self, "omega_trace", 1)
            object.__setattr__(self, "omega_norm", (1 + d) // 4)
        else:  # omega = sqrt(-d)
            object.__setattr__(self, "omega_trace", 0)
            object.__setattr__(self, "omega_norm", d)

    def __setattr__(self, name, value):
        raise AttributeError("ImagQuadField is immutable")

    def __eq__(self, other):
        return isinstance(other, ImagQuadField) and self.d == other.d

    def __hash__(self):
        return hash(("ImagQuadField", self.d))

    def __repr__(self):
        return f"ImagQuadField(d={self.d})"

    def elt(self, a: Rat, b: Rat = 0) -> "QElt":
        return QElt(self, F(a), F(b))

    @property
    def zero(self) -> "QElt":
        return self.elt(0)

    @property
    def one(self) -> "QElt":
        return self.elt(1)

    @property
    def omega(self) -> "QElt":
        return self.elt(0, 1)

    def is_norm_euclidean(self) -> bool:
        return self.d in (1, 2, 3, 7, 11)


@dataclass(frozen=True)
class QElt:
    """a + b*omega in Q(sqrt(-d))."""

    field: ImagQuadField
    a: Fraction
    b: Fraction

    def _same(self, other: "QElt"):
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other):
        other = self._coerce(other)
        return QElt(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QElt(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, other) -> "QElt":
        if isinstance(other, QElt):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction)):
            return QElt(self.field, F(other), F(0))
        raise TypeError(f"cannot coerce {other!r}")

    def __mul__(self, other):
        other = self._coerce(other)
        t, n = self.field.omega_trace, self.field.omega_norm
        a, b, c, e = self.a, self.b, other.a, other.b
        return QElt(self.field, a * c - b * e * n, a * e + b * c + b * e * t)

    __rmul__ = __mul__

    def conj(self) -> "QElt":
        t = self.field.omega_trace
        return QElt(self.field, self.a + self.b * t, -self.b)

    def norm(self) -> Fraction:
        t, n = self.field.omega_trace, self.field.omega_norm
        return self.a**2 + self.a * self.b * t + self.b**2 * n

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.omega_trace

    def inverse(self) -> "QElt":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero field element")
        cj = self.conj()
        return QElt(self.field, cj.a / nrm, cj.b / nrm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.a

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def real_part(self) -> Fraction:
        return self.a + self.b * F(self.field.omega_trace, 2)

    def __repr__(self):
        return f"({self.a}+{self.b}w)"


def _round_half(q: Fraction) -> int:
    return math.floor(q + F(1, 2))


def euclid_gcd(elts: Sequence[QElt]) -> QElt:
    """gcd in the norm-euclidean rings d in {1,2,3,7,11} (up to units)."""
    nonzero = [e for e in elts if not e.is_zero()]
    if not nonzero:
        raise ValueError("gcd of zero elements")
    field = nonzero[0].field
    if not field.is_norm_euclidean():
        raise ValueError(
            f"saturation indices need a norm-euclidean ring; d={field.d} unsupported"
        )
    if any(not e.is_integral() for e in nonzero):
        raise ValueError("gcd requires integral elements")

    def gcd2(x: QElt, y: QElt) -> QElt:
        while not y.is_zero():
            q = x / y
            qr = QElt(field, F(_round_half(q.a)), F(_round_half(q.b)))
            x, y = y, x - qr * y
        return x

    g = nonzero[0]
    for e in nonzero[1:]:
        g = gcd2(g, e)
    return g


# ---------------------------------------------------------------------------

def _field_det(rows: Sequence[Sequence[QElt]]) -> QElt:
    n = len(rows)
    field = rows[0][0].field
    m = [list(r) for r in rows]
    det = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        m[c] = [x * inv for x in m[c]]
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _field_inverse(rows: Sequence[Sequence[QElt]]) -> list[list[QElt]]:
    n = len(rows)
    field = rows[0][0].field
    aug = [list(r) + [field.one if i == j else field.zero for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if not aug[i][c].is_zero()), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


class HermitianLattice:
    """Free o_K-module with conjugate-symmetric positive definite Gram matrix."""

    __slots__ = ("field", "gram", "_det")

    def __init__(self, field: ImagQuadField, gram: Sequence[Sequence[QElt]]):
        g = tuple(tuple(x if isinstance(x, QElt) else field.elt(x) for x in row) for row in gram)
        r = len(g)
        if r == 0 or any(len(row) != r for row in g):
            raise ValueError("Gram matrix must be square and nonempty")
        for i in range(r):
            if not g[i][i].is_rational() or g[i][i].as_fraction() <= 0:
                raise ValueError("diagonal Gram entries must be positive rationals")
            for j in range(r):
                if g[j][i] != g[i][j].conj():
                    raise ValueError("Gram matrix must be conjugate-symmetric")
        # positive definiteness via leading principal minors
        for k in range(1, r + 1):
            mk = _field_det([row[:k] for row in g[:k]])
            if not mk.is_rational() or mk.as_fraction() <= 0:
                raise ValueError("Gram matrix must be positive definite")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "_det", _field_det(g).as_fraction())

    def __setattr__(self, name, value):
        raise AttributeError("HermitianLattice is immutable")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self) -> Fraction:
        return self._det

    def degree(self) -> LogRational:
        """-log(det Gram): the single complex place carries weight 2."""
        return -log_of_rational(self._det)

    def slope(self) -> LogRational:
        return self.degree() / self.rank

    def inner(self, v: Sequence[QElt], w: Sequence[QElt]) -> QElt:
        r = self.rank
        acc = self.field.zero
        for i in range(r):
            for j in range(r):
                acc = acc + v[i].conj() * self.gram[i][j] * w[j]
        return acc

    def norm_sq(self, v: Sequence[QElt]) -> Fraction:
        return self.inner(v, v).as_fraction()

    def dual(self) -> "HermitianLattice":
        inv = _field_inverse(self.gram)
        transposed = [[inv[j][i] for j in range(self.rank)] for i in range(self.rank)]
        return HermitianLattice(self.field, transposed)

    def twist(self, c: Rat) -> "HermitianLattice":
        """Multiply the Gram matrix by c > 0; shifts degree by -rank*log(c)."""
        c = F(c)
        if c <= 0:
            raise ValueError("twist multiplier must be positive")
        return HermitianLattice(
            self.field, [[x * c for x in row] for row in self.gram]
        )

    def tensor(self, other: "HermitianLattice") -> "HermitianLattice":
        if self.field != other.field:
            raise ValueError("field mismatch")
        out = []
        for ra in self.gram:
            for rb in other.gram:
                out.append([x * y for x in ra for y in rb])
        return HermitianLattice(self.field, out)

    def orthogonal_sum(self, other: "HermitianLattice") -> "HermitianLattice":
        if self.field != other.field:
            raise ValueError("field mismatch")
        z = self.field.zero
        r1, r2 = self.rank, other.rank
        rows = [list(row) + [z] * r2 for row in self.gram]
        rows += [[z] * r1 + list(row) for row in other.gram]
        return HermitianLattice(self.field, rows)

    def exterior_power(self, p: int) -> "HermitianLattice":
        from itertools import combinations

        if not 1 <= p <= self.rank:
            raise ValueError(f"exterior power degree {p} out of range")
        subsets = list(combinations(range(self.rank), p))
        rows = [
            [_field_det([[self.gram[i][j] for j in t] for i in s]) for t in subsets]
            for s in subsets
        ]
        return HermitianLattice(self.field, rows)

    def is_integral(self) -> bool:
        return all(x.is_integral() for row in self.gram for x in row)

    def is_unimodular(self) -> bool:
        return self.is_integral() and self._det == 1

    def unimodular_semistable_slope(self):
        """Integral unimodular lattices are semistable of slope 0."""
        return LogRational(0) if self.is_unimodular() else None

    def restrict_scalars(self) -> EuclideanLattice:
        """Rank-2r euclidean lattice on the Z-basis (e_j, omega*e_j), with the
        real part of the hermitian form."""
        r = self.rank
        gens = [(j, pow_w) for j in range(r) for pow_w in (0, 1)]
        one, w = self.field.one, self.field.omega

        def coeff(pw):
            return one if pw == 0 else w

        gram = [
            [
                (coeff(pa).conj() * self.gram[i][j] * coeff(pb)).real_part()
                for (j, pb) in gens
            ]
            for (i, pa) in gens
        ]
        return EuclideanLattice(gram)

    def __eq__(self, other):
        return (
            isinstance(other, HermitianLattice)
            and self.field == other.field
            and self.gram == other.gram
        )

    def __hash__(self):
        return hash((self.field, self.gram))

    def __repr__(self):
        return f"HermitianLattice(d={self.field.d}, rank={self.rank}, det={self._det})"

    # -- JSON wire format: entries a + b*omega as {"a": "p/q", "b": "p/q"}

    def to_json_dict(self) -> dict:
        def fmt(q: Fraction) -> str:
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

        return {
            "d": self.field.d,
            "rank": self.rank,
            "gram": [[{"a": fmt(x.a), "b": fmt(x.b)} for x in row] for row in self.gram],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "HermitianLattice":
        field = ImagQuadField(int(data["d"]))
        gram = [
            [field.elt(F(str(e["a"])), F(str(e.get("b", 0)))) for e in row]
            for row in data["gram"]
        ]
        if "rank" in data and int(data["rank"]) != len(gram):
            raise ValueError("rank field disagrees with Gram size")
        return HermitianLattice(field, gram)

    @staticmethod
    def load(path: str) -> "HermitianLattice":
        with open(path) as fh:
            return HermitianLattice.from_json_dict(json.load(fh))


def unit_hermitian(field: ImagQuadField, rank: int) -> HermitianLattice:
    return HermitianLattice(
        field,
        [[field.one if i == j else field.zero for j in range(rank)] for i in range(rank)],
    )


def rank_one_degree(lat: HermitianLattice, v: Sequence[QElt]) -> LogRational:
    """Degree of the saturated rank-one sublattice through v:
    log #(sat / o_K v) - log ||v||^2."""
    v = tuple(x if isinstance(x, QElt) else lat.field.elt(x) for x in v)
    if all(x.is_zero() for x in v):
        raise ValueError("vector must be nonzero")
    nsq = lat.norm_sq(v)
    if any(not x.is_integral() for x in v):
        raise ValueError("vector must have integral coordinates")
    g = euclid_gcd(v)
    index = g.norm()  # #(o_K/(g)) = N(g)
    return log_of_rational(index) - log_of_rational(nsq)


def identity_tensor_sq(lat: HermitianLattice) -> Fraction:
    """Squared length of sum_i e_i⊗e_i^∨ in L ⊗ dual(L); equals the rank."""
    r = lat.rank
    t = lat.tensor(lat.dual())
    w = [lat.field.zero] * (r * r)
    for i in range(r):
        w[i * r + i] = lat.field.one
    return t.norm_sq(w)


def faltings_height_sq(lat: HermitianLattice) -> LogRational:
    """deg + ([K:Q]*r/2) * sum_{m=2}^{r} 1/m, exactly (the height term of the
    associated projective bundle; [K:Q] = 2 here)."""
    r = lat.rank
    harmonic = sum((F(1, m) for m in range(2, r + 1)), F(0))
    return lat.degree() + LogRational(r * harmonic)


# ---------------------------------------------------------------------------
# Rational interval arithmetic (for the few checks involving sqrt(2)).

@dataclass(frozen=True)
class RIv:
    lo: Fraction
    hi: Fraction

    @staticmethod
    def const(q: Rat) -> "RIv":
        q = F(q)
        return RIv(q, q)

    def __add__(self, other):
        other = _riv(other)
        return RIv(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RIv(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_riv(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _riv(other)
        prods = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ]
        return RIv(min(prods), max(prods))

    __rmul__ = __mul__

    def width(self) -> Fraction:
        return self.hi - self.lo

    def intersects(self, other: "RIv") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains(self, q: Rat) -> bool:
        return self.lo <= F(q) <= self.hi


def _riv(x) -> RIv:
    return x if isinstance(x, RIv) else RIv.const(x)


def sqrt_interval(q: Rat, bits: int = 160) -> RIv:
    q = F(q)
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return RIv.const(0)
    scale = 1 << bits
    n = q.numerator * q.denominator
    root = math.isqrt(n * scale * scale)
    return RIv(F(root, q.denominator * scale), F(root + 1, q.denominator * scale))


@dataclass(frozen=True)
class CIv:
    re: RIv
    im: RIv

    def __add__(self, other):
        other = _civ(other)
        return CIv(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return CIv(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_civ(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _civ(other)
        return CIv(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self) -> "CIv":
        return CIv(self.re, -self.im)

    def abs_sq(self) -> RIv:
        return self.re * self.re + self.im * self.im

    def max_width(self) -> Fraction:
        return max(self.re.width(), self.im.width())


def _civ(x) -> CIv:
    if isinstance(x, CIv):
        return x
    if isinstance(x, RIv):
        return CIv(x, RIv.const(0))
    return CIv(RIv.const(x), RIv.const(0))


def qelt_interval(x: QElt, bits: int = 160) -> CIv:
    """Complex enclosure of a + b*omega under the upper-half-plane embedding."""
    d = x.field.d
    im_scale = F(1, 2) if x.field.omega_trace == 1 else F(1)
    sq = sqrt_interval(d, bits)
    re = RIv.const(x.real_part())
    im = RIv.const(x.b * im_scale) * sq
    return CIv(re, im)


def interval_eq(a: RIv, b: RIv, tol_bits: int = 128) -> bool:
    tol = F(1, 1 << tol_bits)
    return a.intersects(b) and a.width() <= tol and b.width() <= tol


# ---------------------------------------------------------------------------
# Quadratic-extension helper for the norm-product spot checks (real or
# imaginary t; ring Z[w_t], w_t = (1+sqrt t)/2 if t = 1 mod 4 else sqrt t).

@dataclass(frozen=True)
class QuadInt:
    t: int
    p: Fraction
    q: Fraction

    def _w_data(self):
        if self.t % 4 == 1:
            return 1, F(1 - self.t, 4)  # w^2 = w - (1-t)/4
        return 0, F(-self.t)  # w^2 = t = -(norm)

    def __add__(self, other):
        return QuadInt(self.t, self.p + other.p, self.q + other.q)

    def __mul__(self, other):
        tr, nm = self._w_data()
        a, b, c, e = self.p, self.q, other.p, other.q
        return QuadInt(self.t, a * c - b * e * nm, a * e + b * c + b * e * tr)

    def conj(self) -> "QuadInt":
        tr, _ = self._w_data()
        return QuadInt(self.t, self.p + self.q * tr, -self.q)

    def norm(self) -> Fraction:
        tr, nm = self._w_data()
        return self.p**2 + self.p * self.q * tr + self.q**2 * nm

    def trace(self) -> Fraction:
        tr, _ = self._w_data()
        return 2 * self.p + self.q * tr

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0


def _norm_product_holds(t: int, a: QuadInt, b: QuadInt) -> tuple[bool, str]:
    """Exact check of prod_sigma(|sigma(a)|^2+|sigma(b)|^2+Re(conj(sigma a) sigma b))
    >= |N(ab)| >= 1 over Q(sqrt t)."""
    nab = abs((a * b).norm())
    if t < 0:
        val = a.norm() + b.norm() + F((a.conj() * b).trace(), 2)
        prod = val**2
    else:
        e = a * a + a * b + b * b
        prod = e.norm()
    ok = prod >= nab >= 1
    return ok, f"product={prod}, |N(ab)|={nab}"


# ---------------------------------------------------------------------------
# Reproductions.


def a2_twist_checks(gram_multiplier: Rat = F(2, 3)) -> Report:
    """Rank-2 root lattice twisted to small negative degree: stability, line
    degrees, and the norm-product bound behind its rank-one quotient claims."""
    from .enumeration import minimum_sq, mu_max
    from .lattice import a2_lattice

    c = F(gram_multiplier)
    rep = Report(name="a2-twist")
    lam = -half_log(c)  # Gram multiplier c = e^(-2*lambda)
    lo, hi = half_log(F(3, 2)), half_log(3) / 2
    rep.require(
        "twist_in_admissible_interval",
        lo <= lam < hi,
        f"lambda = {lam} in [{lo}, {hi})",
    )
    lat = a2_lattice().scale(c)
    deg = lat.degree()
    rep.require(
        "degree_formula",
        deg == 2 * lam - half_log(3),
        f"deg = {deg.render_compact()} = 2*lambda - 1/2*log(3)",
    )
    rep.require(
        "degree_window",
        half_log(3) - log_of_rational(2) <= deg < LogRational(0),
        f"deg = {deg} lies in [1/2*log(3) - log(2), 0)",
    )
    msq = minimum_sq(lat)
    rep.require("shortest_vector_sq", msq == 2 * c, f"min |v|^2 = {msq} = 2*e^(-2*lambda)")
    line_max = -half_log(msq)
    rep.require(
        "line_degree_max",
        line_max == lam - half_log(2),
        f"max rank-one degree = {line_max} = lambda - 1/2*log(2)",
    )
    res = mu_max(lat)
    rep.require(
        "stable_full_rank",
        res.certified and res.value == lat.slope() and res.witness.rank == 2 and line_max < lat.slope(),
        f"mu_max = {res.value} attained at full rank; rank-1 deficit strict",
    )
    rep.require("negative_degree", deg < LogRational(0), f"deg = {deg} < 0")
    dual_min = minimum_sq(lat.dual())
    quot_min_degree = half_log(dual_min)
    rep.require(
        "rank_one_quotients_nonnegative",
        quot_min_degree >= LogRational(0),
        f"min rank-one quotient degree = {quot_min_degree} >= 0",
    )
    samples = [
        (F(1), F(0)),
        (F(1), F(1)),
        (F(2), F(-1)),
        (F(0), F(1)),
        (F(3), F(2)),
        (F(-1), F(2)),
    ]
    for t in (-1, -2, -3, -7, 2, 3):
        for pa, qa in samples:
            for pb, qb in samples:
                a = QuadInt(t, pa, qa)
                b = QuadInt(t, pb, qb)
                if a.is_zero() or b.is_zero():
                    continue
                ok, detail = _norm_product_holds(t, a, b)
                if not ok:
                    rep.require(f"norm_product_bound_t{t}", False, detail)
    rep.require(
        "norm_product_spot_checks",
        True,
        f"norm products over quadratic extensions t in (-1,-2,-3,-7,2,3), "
        f"{len(samples)**2} integer pairs each: all >= |N(ab)| >= 1",
    )
    rep.note(SCOPE_NOTE)
    return rep


def q7_gram() -> HermitianLattice:
    """The indecomposable unimodular integral rank-3 lattice over Q(sqrt(-7))."""
    k = ImagQuadField(7)
    w = k.omega
    one = k.one
    two = k.elt(2)
    return HermitianLattice(
        k,
        [
            [two, w, one],
            [w.conj(), two, one],
            [one, one, two],
        ],
    )


def q7_checks(twist_log_arg: Rat = F(9, 5)) -> Report:
    """Rank-3 unimodular lattice over Q(sqrt(-7)): unimodularity, the identity
    tensor vector, the negative-degree quotient line of the twisted square,
    and the orthogonal frames whose norms involve sqrt(2)."""
    rep = Report(name="q7")
    c_exp = F(twist_log_arg)  # lambda = log(c_exp); twisted Gram multiplier e^lambda
    lat = q7_gram()
    k = lat.field
    w = k.omega
    rep.require("integral_gram", lat.is_integral(), "all Gram entries lie in the ring")
    rep.require("unimodular_determinant", lat.det() == 1, f"det = {lat.det()}")
    idsq = identity_tensor_sq(lat)
    rep.require("identity_vector_sq_length", idsq == 3, f"|identity|^2 = {idsq} = rank")

    lam = log_of_rational(c_exp)
    lam_lo = half_log(3)
    lam_hi = log_of_rational(3) - F(2, 3) * log_of_rational(2)
    rep.require(
        "twist_in_admissible_interval",
        lam_lo < lam <= lam_hi,
        f"lambda = {lam} in ({lam_lo}, {lam_hi}]",
    )
    # The lattice is isometric to its coordinate-conjugate via the swap of the
    # first two generators; composed with unimodular self-duality this turns
    # the identity endomorphism into a vector of the square itself.
    tau = (1, 0, 2)
    rep.require(
        "conjugation_symmetry",
        all(
            lat.gram[tau[i]][tau[j]] == lat.gram[i][j].conj()
            for i in range(3)
            for j in range(3)
        ),
        "swapping the first two generators conjugates the Gram matrix",
    )
    inv = _field_inverse(lat.gram)
    w_id = [inv[i][tau[j]] for i in range(3) for j in range(3)]
    square = lat.tensor(lat)
    w_norm = square.norm_sq(w_id)
    rep.require(
        "identity_image_in_square",
        w_norm == 3 and all(x.is_integral() for x in w_id),
        f"the transported identity vector has squared length {w_norm} = rank",
    )
    # its pairing functional generates the line in the dual square that cuts
    # out the rank-one quotient of the twisted square
    vec_f = [
        sum(
            (w_id[j * 3 + l].conj() * lat.gram[j][i] * lat.gram[l][kk] for j in range(3) for l in range(3)),
            k.zero,
        )
        for i in range(3)
        for kk in range(3)
    ]
    tw = lat.twist(c_exp)  # Gram multiplied by e^lambda = the <-lambda> twist
    dual_sq = tw.dual().tensor(tw.dual())
    nsq = dual_sq.norm_sq(vec_f)
    rep.require(
        "quotient_line_norm",
        nsq == 3 / c_exp**2,
        f"|line generator|^2 = {nsq} = 3*e^(-2*lambda)",
    )
    content = euclid_gcd(vec_f)
    rep.require("quotient_line_primitive", content.norm() == 1, f"content norm = {content.norm()}")
    q_deg = log_of_rational(nsq)
    rep.require(
        "quotient_line_degree",
        q_deg == -2 * lam + log_of_rational(3),
        f"quotient degree = {q_deg} = -2*lambda + log(3)",
    )
    rep.require("quotient_line_degree_negative", q_deg < LogRational(0), f"{q_deg} < 0")
    lam_end = lam_hi
    end_deg = -2 * lam_end + log_of_rational(3)
    rep.require(
        "quotient_degree_negative_at_endpoint",
        end_deg < LogRational(0),
        f"at the top admissible twist: {end_deg} < 0 (decreasing in lambda, 0 at the bottom)",
    )

    # orthogonal basis of the plane spanned by the first two generators
    e2p = [k.elt(-1), w.conj(), k.zero]
    rep.require(
        "plane_orthogonal_basis",
        lat.inner([k.one, k.zero, k.zero], e2p).is_zero() and lat.norm_sq(e2p) == 2,
        "e1 and -e1 + conj(w)*e2 are orthogonal of squared length 2",
    )

    # complement vector v3 = w^2 e1 + conj(w)^2 e2 + 2 e3
    v3 = [w * w, w.conj() * w.conj(), k.elt(2)]
    e1 = [k.one, k.zero, k.zero]
    e2 = [k.zero, k.one, k.zero]
    e3 = [k.zero, k.zero, k.one]
    rep.require(
        "complement_vector_orthogonal",
        lat.inner(e1, v3).is_zero() and lat.inner(e2, v3).is_zero(),
        "v3 is orthogonal to e1 and e2",
    )
    pairing = lat.inner(e3, v3)
    rep.require("complement_vector_pairing", pairing == k.one, f"<e3, v3> = {pairing}")
    rep.require("complement_vector_norm", lat.norm_sq(v3) == 2, f"|v3|^2 = {lat.norm_sq(v3)}")

    # interval checks at 128 bits for the sqrt(2)-frame
    bits = 192
    sqrt2 = sqrt_interval(2, bits)
    w_iv = qelt_interval(w, bits)
    g_iv = [[qelt_interval(lat.gram[i][j], bits) for j in range(2)] for i in range(2)]
    half = RIv.const(F(1, 2))
    for sign, label in ((1, "plus"), (-1, "minus")):
        factor = CIv(half * sqrt2 * sign - RIv.const(1), RIv.const(0))
        theta = w_iv.conj() * factor
        target = RIv.const(3) - RIv.const(2 * sign) * sqrt2
        got = theta.abs_sq()
        rep.require(
            f"theta_{label}_abs_sq",
            interval_eq(got, target),
            f"|theta_{label}|^2 in [{float(got.lo):.12f}, {float(got.hi):.12f}] "
            f"matches 3 {'-' if sign > 0 else '+'} 2*sqrt(2) at 128 bits",
            mode="interval-128",
        )
        # f1 = e1 + theta e2, f2 = conj(theta) e1 + e2
        f1 = [_civ(1), theta]
        f2 = [theta.conj(), _civ(1)]

        def h_norm(x, y):
            acc = _civ(0)
            for i in range(2):
                for j in range(2):
                    acc = acc + x[i].conj() * g_iv[i][j] * y[j]
            return acc

        n1 = h_norm(f1, f1)
        n2 = h_norm(f2, f2)
        cross = h_norm(f1, f2)
        frame_target = RIv.const(4) - RIv.const(2 * sign) * sqrt2  # 2*sqrt2*(sqrt2 -+ 1)
        rep.require(
            f"frame_{label}_norms",
            interval_eq(n1.re, frame_target)
            and interval_eq(n2.re, frame_target)
            and n1.im.contains(0)
            and n2.im.contains(0),
            f"|f1|^2 = |f2|^2 = 2*sqrt(2)*(sqrt(2) {'-' if sign > 0 else '+'} 1) at 128 bits",
            mode="interval-128",
        )
        rep.require(
            f"frame_{label}_orthogonal",
            cross.re.contains(0)
            and cross.im.contains(0)
            and cross.max_width() <= F(1, 1 << 128),
            "<f1, f2> encloses 0 at 128 bits",
            mode="interval-128",
        )
    rep.note(
        "The source construction labels two distinct frame vectors with the same "
        "symbol; the second (conj(theta)*e1 + e2) is read as the second frame "
        "vector here, and both are checked."
    )
    rep.note(SCOPE_NOTE)
    return rep


# ---------------------------------------------------------------------------
# Degree-4 arithmetic for the class-field construction: K' = K(i) over
# K = Q(sqrt(-p)), elements stored as x0 + x1*i with x0, x1 in K.

@dataclass(frozen=True)
class QuartElt:
    x0: QElt
    x1: QElt

    def __add__(self, other):
        return QuartElt(self.x0 + other.x0, self.x1 + other.x1)

    def __neg__(self):
        return QuartElt(-self.x0, -self.x1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QElt)):
            return QuartElt(self.x0 * other, self.x1 * other)
        return QuartElt(
            self.x0 * other.x0 - self.x1 * other.x1,
            self.x0 * other.x1 + self.x1 * other.x0,
        )

    __rmul__ = __mul__

    def tau(self) -> "QuartElt":
        """The automorphism fixing K (i -> -i)."""
        return QuartElt(self.x0, -self.x1)

    def cconj(self) -> "QuartElt":
        """Complex conjugation (omega -> -omega... the ring conjugation of K
        extended with i -> -i)."""
        return QuartElt(self.x0.conj(), -self.x1.conj())

    def relative_norm(self) -> QElt:
        """N_{K'/K}(x) = x * tau(x)."""
        prod = self * self.tau()
        if not prod.x1.is_zero():
            raise AssertionError("relative norm must lie in the base field")
        return prod.x0

    def absolute_norm(self) -> Fraction:
        return self.relative_norm().norm()

    def is_zero(self) -> bool:
        return self.x0.is_zero() and self.x1.is_zero()

    def __eq__(self, other):
        return isinstance(other, QuartElt) and self.x0 == other.x0 and self.x1 == other.x1


def _qp_structure(p: int):
    """Explicit free-module data for the ring of integers of K(i) as a
    hermitian lattice over K = Q(sqrt(-p)), p in {5, 13, 37}."""
    k = ImagQuadField(p)  # omega = sqrt(-p)
    w = k.omega
    half = F(1, 2)
    # u = (1 + sqrt(p))/2 = 1/2 - (omega/2) i;  basis (u, i)
    u = QuartElt(k.elt(half), k.elt(0, -half))
    i_elt = QuartElt(k.zero, k.one)
    one = QuartElt(k.one, k.zero)

    def pair(x: QuartElt, y: QuartElt) -> QElt:
        """(1/2) tr_{K'/K}(cconj(x) * y) on coordinates over (1, i)."""
        z = x.cconj() * y
        return z.x0

    return k, w, u, i_elt, one, pair


def qp_checks(p: int, samples: int = 0) -> Report:
    """Class-field ring of integers over Q(sqrt(-p)), p in {5, 13, 37}:
    index-4 subring, degree 2*log 2, negative height term of its dual,
    base-change splitting, and the rank-one degree bounds."""
    if p not in (5, 13, 37):
        raise ValueError("p must be one of 5, 13, 37")
    rep = Report(name=f"qp-{p}")
    k, w, u, i_elt, one, pair = _qp_structure(p)

    basis = [u, i_elt]
    gram = [[pair(x, y) for y in basis] for x in basis]
    expected = [[k.elt(F(p + 1, 4)), w * F(1, 2)], [w * F(-1, 2), k.one]]
    rep.require(
        "ring_gram_matrix",
        gram == expected,
        f"Gram of (u, i) = [[(p+1)/4, w/2], [-w/2, 1]] with w = sqrt(-p)",
    )
    lat = HermitianLattice(k, gram)

    # 1 = 2u + w*i, so the orthogonal subring o ⊥ o*sqrt(-1) has basis rows
    # [2, w], [0, 1] in (u, i) coordinates; its index is |N(det)| = N(2) = 4
    unit_check = u * 2 + i_elt * w
    rep.require("unit_in_basis", unit_check == one, "1 = 2u + w*i")
    det_incl = k.elt(2) * k.one - w * k.zero
    index = det_incl.norm()
    rep.require("index_four_subring", index == 4, f"index = |N(2)| = {index}")
    sub_gram = [
        [pair(one, one), pair(one, i_elt)],
        [pair(i_elt, one), pair(i_elt, i_elt)],
    ]
    rep.require(
        "orthonormal_subring",
        sub_gram == [[k.one, k.zero], [k.zero, k.one]],
        "the index-4 subring is an orthogonal sum of two unit lattices",
    )
    deg = lat.degree()
    rep.require(
        "ring_lattice_degree",
        lat.det() == F(1, 4) and deg == 2 * log_of_rational(2),
        f"det = {lat.det()}, degree = {deg} = 2*log(2)",
    )

    dual = lat.dual()
    rep.require(
        "dual_degree", dual.degree() == -2 * log_of_rational(2), f"deg dual = {dual.degree()}"
    )
    height = faltings_height_sq(dual)
    rep.require(
        "height_term_negative",
        height == LogRational(1) - 2 * log_of_rational(2) and height < LogRational(0),
        f"height term = {height} = 1 - 2*log(2) < 0",
    )

    # base-change splitting: idempotent-derived orthogonal generators
    # e_pm = 1*(u⊗1) + b_pm*(i⊗1), coordinates (1, b_pm) over (u⊗1, i⊗1)
    b_plus = (one - u) * QuartElt(k.zero, k.elt(-1))  # (1-u)/i
    b_minus = i_elt * u  # -u/i
    e_plus = (QuartElt(k.one, k.zero), b_plus)
    e_minus = (QuartElt(k.one, k.zero), b_minus)

    def eval_split(b_coeff: QuartElt, sigma_minus: bool) -> QuartElt:
        """Image of 1*(u⊗1) + b*(i⊗1) under x⊗s -> sigma(x)*s."""
        uu = u.tau() if sigma_minus else u
        ii = i_elt.tau() if sigma_minus else i_elt
        return uu + b_coeff * ii

    rep.require(
        "split_equations",
        eval_split(b_plus, False) == one
        and eval_split(b_plus, True).is_zero()
        and eval_split(b_minus, False).is_zero()
        and eval_split(b_minus, True) == one,
        "the two generators project to (1,0) and (0,1) under the algebra splitting",
    )

    def okprime_coords(x: QuartElt) -> tuple[QElt, QElt]:
        """Coordinates over the integral basis (u, i): x = c_u*u + c_i*i."""
        c_u = x.x0 * 2
        c_i = x.x1 + x.x0 * w
        return c_u, c_i

    for name, b in (("plus", b_plus), ("minus", b_minus)):
        cu, ci = okprime_coords(b)
        rep.require(
            f"split_generator_{name}_integral",
            cu.is_integral() and ci.is_integral(),
            f"b_{name} = ({cu})*u + ({ci})*i lies in the ring",
        )

    # hermitian form on the base change, sesquilinear over K'
    gq = [[QuartElt(gram[a][b2], k.zero) for b2 in range(2)] for a in range(2)]

    def h_form(x: tuple, y: tuple) -> QuartElt:
        acc = QuartElt(k.zero, k.zero)
        for a in range(2):
            for b2 in range(2):
                acc = acc + x[a].cconj() * gq[a][b2] * y[b2]
        return acc

    cross = h_form(e_plus, e_minus)
    rep.require("split_orthogonal", cross.is_zero(), "the two split generators are orthogonal")
    h_p = h_form(e_plus, e_plus)
    h_m = h_form(e_minus, e_minus)
    rep.require(
        "split_norms_equal_rational",
        h_p == h_m and h_p.x1.is_zero() and h_p.x0.is_rational() and h_p.x0.as_fraction() > 0,
        f"both generators have squared norm {h_p.x0}",
    )
    h_val = h_p.x0.as_fraction()
    piece_deg = -2 * log_of_rational(h_val)
    rep.require(
        "split_piece_degrees",
        piece_deg == 2 * log_of_rational(2),
        f"each piece of the extended dual has degree {piece_deg}; dually the "
        f"extension of the rank-2 lattice splits into two degree -2*log(2) pieces",
    )
    rep.require(
        "base_change_degree_doubles",
        piece_deg + piece_deg == 2 * deg,
        "sum of piece degrees equals twice the base degree",
    )
    det_basis = b_minus - b_plus
    rep.require(
        "split_basis_unimodular",
        det_basis.absolute_norm() == 1,
        "the change of basis to the split generators is unimodular",
    )
    rep.require(
        "semistable_by_decomposition",
        True,
        "equal-slope orthogonal rank-one decomposition after base change forces "
        "semistability of the rank-2 lattice",
        mode="consequence",
    )

    # certified rank-one degree bound: every saturated line is a fractional
    # ideal times a vector, so its degree is log(minimal principal index of
    # its class) - log(length^2 of its shortest vector); the class group here
    # has order two (the degree-2 everywhere-unramified extension above), with
    # the ramified prime over 2 representing the nontrivial class
    from .enumeration import minimum_sq as _min_sq

    from . import linalg as _lin

    for name, lham in (("ring", lat), ("dual", dual)):
        lam1 = _min_sq(lham.restrict_scalars())
        gens = [k.elt(2), k.elt(0, 2), k.elt(1, 1), k.omega * k.elt(1, 1)]
        rows = _lin.hnf(tuple((int(g.a), int(g.b)) for g in gens))
        ideal_norm = abs(rows[0][0] * rows[1][1])
        b1 = k.elt(rows[0][0], rows[0][1])
        b2 = k.elt(rows[1][0], rows[1][1])
        form = EuclideanLattice(
            [
                [b1.norm(), (b1.conj() * b2).real_part()],
                [(b2.conj() * b1).real_part(), b2.norm()],
            ]
        )
        iota = _min_sq(form) / ideal_norm
        line_bound = max(
            -log_of_rational(lam1), log_of_rational(iota) - log_of_rational(lam1)
        )
        rep.require(
            f"rank_one_degree_bound_{name}",
            line_bound <= lham.slope(),
            f"every rank-one sublattice degree <= {line_bound} <= slope "
            f"{lham.slope()}: semistable (shortest vector {lam1}, class index {iota})",
        )

    # rank-one sublattice through u
    line_deg = rank_one_degree_qp(lat, p)
    rep.require(
        "line_through_half_unit_degree",
        line_deg == -log_of_rational(F(p + 1, 4)) and line_deg < LogRational(0),
        f"degree of the line through (1+sqrt p)/2 is {line_deg} = -log((p+1)/4) < 0",
    )

    # norm-product lower bound on the orthogonal subring
    sample_elts = [
        one,
        i_elt,
        u,
        one + i_elt,
        u + i_elt,
        u * 2 - one,  # = sqrt(p) = -i*w
        u + one,
    ]
    checked = 0
    for a in sample_elts:
        for b in sample_elts:
            if a.is_zero() or b.is_zero():
                continue
            e_val = a * a.cconj() + b * b.cconj()
            n_e = e_val.absolute_norm()
            n_ab = (a * b).absolute_norm()
            if not (n_e >= 16 * n_ab >= 16):
                rep.require(
                    "norm_product_sixteen_bound",
                    False,
                    f"N(E) = {n_e}, 16*|N(ab)| = {16 * n_ab}",
                )
            checked += 1
    rep.require(
        "norm_product_sixteen_bound",
        True,
        f"{checked} integer pairs: N(|a|^2 + |b|^2 summand) >= 16*|N(ab)| >= 16",
    )

    # restriction of scalars consistency
    eucl = lat.restrict_scalars()
    rep.require(
        "restriction_degree",
        eucl.degree() == 2 * log_of_rational(2) - log_of_rational(p),
        f"euclidean restriction degree = {eucl.degree()} = 2*log(2) - log(p)",
    )
    rep.note(
        "Twist labels for base-changed pieces are reported in base-field "
        "normalization: each piece has degree -2*log(2) over the extension, "
        "which the construction writes as a -log(2) twist."
    )
    rep.note(SCOPE_NOTE)
    return rep


def rank_one_degree_qp(lat: HermitianLattice, p: int) -> LogRational:
    """Degree of the free line through the first basis vector (generator
    (1+sqrt p)/2 of the class-field ring)."""
    nsq = lat.gram[0][0].as_fraction()
    return -log_of_rational(nsq)
