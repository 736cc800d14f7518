"""Exact arithmetic in totally real quadratic and biquadratic fields.

Elements are stored as integer coordinate vectors over a common positive
denominator in the power basis (1, sqrt(m), sqrt(s), sqrt(t)) for a
biquadratic field, or (1, sqrt(n)) for a quadratic field.  All sign and
comparison questions are settled with integer arithmetic only; no floating
point is involved anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


class FieldError(Exception):
    pass


class NotSquarefree(FieldError):
    pass


class EqualGenerators(FieldError):
    pass


class OutOfRange(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


def sign(x):
    """Sign of a rational or integer as -1, 0 or +1."""
    return (x > 0) - (x < 0)


def is_squarefree(n):
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1
    return True


def squarefree_part(n):
    """Return (f, n0) with n = f**2 * n0 and n0 squarefree, n >= 1."""
    if n < 1:
        raise OutOfRange(f"expected a positive integer, got {n}")
    f, n0, d = 1, 1, 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        f *= d ** (e // 2)
        if e % 2:
            n0 *= d
        d += 1
    return f, n0 * n


def quad_sign(u, v, n):
    """Exact sign of u + v*sqrt(n) for rational u, v and non-square n > 1."""
    if v == 0:
        return sign(u)
    if u == 0:
        return sign(v)
    su, sv = sign(u), sign(v)
    if su == sv:
        return su
    return su * sign(u * u - v * v * n)


# Galois action on the coordinates (b, c, d) of b*sqrt(m)+c*sqrt(s)+d*sqrt(t).
SIGN_PATTERNS = ((1, 1, 1), (-1, 1, -1), (1, -1, -1), (-1, -1, 1))


def biquad_sign(a, b, c, d, m, s, t0):
    """Exact sign of a + b*sqrt(m) + c*sqrt(s) + d*sqrt(t), t = m*s/t0**2.

    Writes the value as ((a*t0 + b*t0*sqrt(m)) + (c*t0 + d*sqrt(m))*sqrt(s))/t0
    and resolves the sign by nested quadratic sign tests.
    """
    u1, u2 = a * t0, b * t0
    v1, v2 = c * t0, d
    su = quad_sign(u1, u2, m)
    sv = quad_sign(v1, v2, m)
    if sv == 0:
        return su
    if su == 0:
        return sv
    if su == sv:
        return su
    # sign(U + V*sqrt(s)) = sign(U) * sign(U^2 - V^2*s) when signs differ.
    w1 = u1 * u1 + u2 * u2 * m - s * (v1 * v1 + v2 * v2 * m)
    w2 = 2 * (u1 * u2 - s * v1 * v2)
    return su * quad_sign(w1, w2, m)


@dataclass(frozen=True)
class QuadraticField:
    """The real quadratic field Q(sqrt(n)) for squarefree n > 1."""

    n: int

    @property
    def degree(self):
        return 2

    @property
    def radicands(self):
        return (self.n,)

    def __post_init__(self):
        if self.n <= 1:
            raise OutOfRange(f"radicand must exceed 1, got {self.n}")
        if not is_squarefree(self.n):
            raise NotSquarefree(f"{self.n} is not squarefree")

    def mul_coords(self, x, y):
        a1, b1 = x
        a2, b2 = y
        return (a1 * a2 + b1 * b2 * self.n, a1 * b2 + b1 * a2)

    def embedding_sign(self, coords, i):
        a, b = coords
        return quad_sign(a, b if i == 0 else -b, self.n)

    def element(self, num, den=1):
        return Element.make(self, tuple(num), den)

    def zero(self):
        return self.element((0, 0))

    def one(self):
        return self.element((1, 0))

    def from_rational(self, r):
        r = Fraction(r)
        return self.element((r.numerator, 0), r.denominator)

    def sqrt_of(self, k):
        """sqrt(k) as an element, if k is a square in the field."""
        f, k0 = squarefree_part(k)
        if k0 == 1:
            return self.element((f, 0))
        if k0 == self.n:
            return self.element((0, f))
        raise ForeignRadical(k)

    def __repr__(self):
        return f"Q(sqrt({self.n}))"


class ForeignRadical(FieldError):
    """sqrt(k) does not lie in the active field."""

    def __init__(self, radicand):
        self.radicand = radicand
        super().__init__(f"sqrt({radicand}) does not lie in the field")


BASIS_TYPES = ("B1", "B2", "B3", "B4a", "B4b")


@dataclass(frozen=True)
class BiquadraticField:
    """A totally real biquadratic field Q(sqrt(p), sqrt(q)).

    Canonical generators m < s < t are the three squarefree integers whose
    roots lie in the field; m0, s0, t0 are the pairwise gcds.  basis_type is
    one of B1..B4b and role assignment records which of m, s, t play the
    parts of p, q, r in the integral-basis table.
    """

    p: int
    q: int
    m: int
    s: int
    t: int
    m0: int
    s0: int
    t0: int
    basis_type: str
    roles: tuple  # (p_role, q_role, r_role), a permutation of (m, s, t)

    @property
    def degree(self):
        return 4

    @property
    def radicands(self):
        return (self.m, self.s, self.t)

    def mul_coords(self, x, y):
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        m, s, t = self.m, self.s, self.t
        m0, s0, t0 = self.m0, self.s0, self.t0
        return (
            a1 * a2 + b1 * b2 * m + c1 * c2 * s + d1 * d2 * t,
            a1 * b2 + b1 * a2 + m0 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + s0 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + t0 * (b1 * c2 + c1 * b2),
        )

    def embedding_sign(self, coords, i):
        a, b, c, d = coords
        em, es, et = SIGN_PATTERNS[i]
        return biquad_sign(a, em * b, es * c, et * d, self.m, self.s, self.t0)

    def element(self, num, den=1):
        return Element.make(self, tuple(num), den)

    def zero(self):
        return self.element((0, 0, 0, 0))

    def one(self):
        return self.element((1, 0, 0, 0))

    def from_rational(self, r):
        r = Fraction(r)
        return self.element((r.numerator, 0, 0, 0), r.denominator)

    def sqrt_of(self, k):
        f, k0 = squarefree_part(k)
        if k0 == 1:
            return self.element((f, 0, 0, 0))
        for pos, rad in enumerate(self.radicands):
            if k0 == rad:
                num = [0, 0, 0, 0]
                num[pos + 1] = f
                return self.element(tuple(num))
        raise ForeignRadical(k)

    def basis_matrix(self):
        """Columns of the integral basis in (1, sqrt m, sqrt s, sqrt t) coords."""
        pos = {rad: i + 1 for i, rad in enumerate(self.radicands)}

        def vec(*terms, den=1):
            col = [Fraction(0)] * 4
            for coeff, rad in terms:
                idx = 0 if rad == 1 else pos[rad]
                col[idx] += Fraction(coeff, den)
            return tuple(col)

        pr, qr, rr = self.roles
        one = vec((1, 1))
        if self.basis_type == "B1":
            cols = (one, vec((1, pr)), vec((1, qr)), vec((1, pr), (1, rr), den=2))
        elif self.basis_type in ("B2", "B3"):
            cols = (
                one,
                vec((1, pr)),
                vec((1, 1), (1, qr), den=2),
                vec((1, pr), (1, rr), den=2),
            )
        elif self.basis_type == "B4a":
            cols = (
                one,
                vec((1, 1), (1, pr), den=2),
                vec((1, 1), (1, qr), den=2),
                vec((1, 1), (1, pr), (1, qr), (1, rr), den=4),
            )
        else:  # B4b
            cols = (
                one,
                vec((1, 1), (1, pr), den=2),
                vec((1, 1), (1, qr), den=2),
                vec((1, 1), (-1, pr), (1, qr), (1, rr), den=4),
            )
        return cols

    def __repr__(self):
        return f"Q(sqrt({self.m}),sqrt({self.s}))"


def classify_field(p, q):
    """Canonical descriptor for the totally real biquadratic field Q(sqrt p, sqrt q)."""
    for v in (p, q):
        if v <= 1:
            raise OutOfRange(f"generator must exceed 1, got {v}")
        if not is_squarefree(v):
            raise NotSquarefree(f"{v} is not squarefree")
    if p == q:
        raise EqualGenerators(f"generators must be distinct, got {p} twice")
    g = gcd(p, q)
    r = p * q // (g * g)
    m, s, t = sorted((p, q, r))
    m0, s0, t0 = gcd(s, t), gcd(m, t), gcd(m, s)

    residues = {v: v % 4 for v in (m, s, t)}
    evens = sorted(v for v in (m, s, t) if residues[v] == 2)
    if evens:
        # Exactly two of the radicands are 2 mod 4; they take the p, r roles.
        q_role = next(v for v in (m, s, t) if residues[v] != 2)
        roles = (evens[0], q_role, evens[1])
        basis_type = "B1" if q_role % 4 == 3 else "B2"
    else:
        threes = sorted(v for v in (m, s, t) if residues[v] == 3)
        if threes:
            q_role = next(v for v in (m, s, t) if residues[v] == 1)
            roles = (threes[0], q_role, threes[1])
            basis_type = "B3"
        else:
            roles = (m, s, t)
            basis_type = "B4a" if t0 % 4 == 1 else "B4b"
    return BiquadraticField(
        p=p, q=q, m=m, s=s, t=t, m0=m0, s0=s0, t0=t0,
        basis_type=basis_type, roles=roles,
    )


class Element:
    """An exact field element: integer coordinates over a positive denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    @staticmethod
    def make(field, num, den=1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = tuple(-v for v in num), -den
        g = den
        for v in num:
            g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            num = tuple(v // g for v in num)
            den //= g
        return Element(field, tuple(num), den)

    def _check(self, other):
        if not isinstance(other, Element):
            other = self.field.from_rational(other)
        elif other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        d1, d2 = self.den, other.den
        num = tuple(a * d2 + b * d1 for a, b in zip(self.num, other.num))
        return Element.make(self.field, num, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        d1, d2 = self.den, other.den
        num = tuple(a * d2 - b * d1 for a, b in zip(self.num, other.num))
        return Element.make(self.field, num, d1 * d2)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return Element(self.field, tuple(-v for v in self.num), self.den)

    def __mul__(self, other):
        other = self._check(other)
        num = self.field.mul_coords(self.num, other.num)
        return Element.make(self.field, num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Element):
            if not other.is_rational():
                raise FieldError("division only by nonzero rationals")
            other = other.as_rational()
        other = Fraction(other)
        if other == 0:
            raise ZeroDivisionError("division by zero")
        num = tuple(v * other.denominator for v in self.num)
        return Element.make(self.field, num, self.den * other.numerator)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def square(self):
        return self * self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, Element):
            return NotImplemented
        return (
            self.field == other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self):
        return all(v == 0 for v in self.num)

    def is_rational(self):
        return all(v == 0 for v in self.num[1:])

    def as_rational(self):
        if not self.is_rational():
            raise FieldError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def coords(self):
        """Coordinates in the power basis, as Fractions."""
        return tuple(Fraction(v, self.den) for v in self.num)

    def conjugate(self, i):
        if self.field.degree == 2:
            a, b = self.num
            num = (a, b) if i == 0 else (a, -b)
        else:
            a, b, c, d = self.num
            em, es, et = SIGN_PATTERNS[i]
            num = (a, em * b, es * c, et * d)
        return Element(self.field, num, self.den)

    def conjugates(self):
        return tuple(self.conjugate(i) for i in range(self.field.degree))

    def abs_trace(self):
        """Trace divided by the degree: the rational coordinate."""
        return Fraction(self.num[0], self.den)

    def abs_trace_of_square(self):
        """abs_trace(self**2) in closed form, without forming the product."""
        q = sum(v * v * w for v, w in zip(self.num, (1,) + self.field.radicands))
        return Fraction(q, self.den * self.den)

    def sign_at_embedding(self, i):
        if self.field.degree == 2:
            a, b = self.num
            return quad_sign(a, b if i == 0 else -b, self.field.n)
        return self.field.embedding_sign(self.num, i)

    def is_totally_nonnegative(self):
        return all(self.sign_at_embedding(i) >= 0 for i in range(self.field.degree))

    def is_totally_positive(self):
        return all(self.sign_at_embedding(i) > 0 for i in range(self.field.degree))

    def dominates(self, other):
        """self >= other in the total (semi-)ordering by all embeddings."""
        return (self - other).is_totally_nonnegative()

    def __str__(self):
        names = ("",) + tuple(f"sqrt({r})" for r in self.field.radicands)
        terms = []
        for v, name in zip(self.num, names):
            if v == 0:
                continue
            coeff = Fraction(v, self.den)
            if name == "":
                terms.append((coeff, ""))
            else:
                terms.append((coeff, name))
        if not terms:
            return "0"
        parts = []
        for coeff, name in terms:
            mag = abs(coeff)
            if name == "":
                body = str(mag)
            elif mag == 1:
                body = name
            else:
                body = f"{mag}*{name}"
            parts.append(("-" if coeff < 0 else "+", body))
        out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for op, body in parts[1:]:
            out += f" {op} {body}"
        return out

    def __repr__(self):
        return f"<{self} in {self.field}>"


@dataclass(frozen=True)
class QuadraticOrderDescriptor:
    """Bookkeeping for a quadratic order Z[sqrt(N)] or Z[(1+sqrt(N))/2]."""

    N: int
    half: bool

    @property
    def f(self):
        return squarefree_part(self.N)[0]

    @property
    def n(self):
        return squarefree_part(self.N)[1]

    def __post_init__(self):
        if self.N <= 1:
            raise OutOfRange(f"N must exceed 1, got {self.N}")
        if isqrt(self.N) ** 2 == self.N:
            raise SquareN(f"N must not be a perfect square, got {self.N}")
        if self.half and self.N % 4 != 1:
            raise BadCongruence(f"half form needs N = 1 mod 4, got N = {self.N}")

    def label(self):
        return f"Z[(1+sqrt({self.N}))/2]" if self.half else f"Z[sqrt({self.N})]"


class SquareN(FieldError):
    pass


class BadCongruence(FieldError):
    pass
