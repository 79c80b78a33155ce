"""Exact scalar arithmetic: rationals, cyclotomic numbers, rational polynomials
and truncated series.

Rationals are gmpy2.mpq when available (much faster in row reduction) and
fractions.Fraction otherwise; both expose numerator/denominator and the same
operator surface, so nothing downstream cares which one is active.

A CycloScalar is an element of Q(zeta_n) stored as its coefficient vector on
the power basis 1, zeta, ..., zeta^(phi(n)-1), reduced modulo the n-th
cyclotomic polynomial.  Binary operations promote both operands to the least
common conductor.  Equality, hashing and serialisation go through a canonical
form with minimal conductor, so zeta_4 * zeta_4 == -1 holds on the nose.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DomainError, UsageError

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as QQ

QQ_ZERO = QQ(0)
QQ_ONE = QQ(1)


def qq(value) -> QQ:
    """Coerce an int, string 'p/q' or rational to QQ."""
    if isinstance(value, str):
        if "/" in value:
            num, den = value.split("/", 1)
            return QQ(int(num), int(den))
        return QQ(int(value))
    return QQ(value)


def qq_str(value) -> str:
    v = QQ(value)
    if v.denominator == 1:
        return str(v.numerator)
    return "%d/%d" % (v.numerator, v.denominator)


def is_rational_like(value) -> bool:
    return isinstance(value, (int, type(QQ_ZERO)))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# ---------------------------------------------------------------------------
# rational polynomials and series


class RatPoly:
    """Dense univariate polynomial over Q, coefficients in ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [qq(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def monomial(degree: int, coeff=1) -> "RatPoly":
        return RatPoly([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, type(QQ_ZERO))):
            other = RatPoly([other])
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def coeff(self, k: int) -> QQ:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else QQ_ZERO

    def __add__(self, other):
        if isinstance(other, (int, type(QQ_ZERO))):
            other = RatPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, type(QQ_ZERO))):
            other = RatPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return RatPoly([other]) - self

    def __mul__(self, other):
        if isinstance(other, (int, type(QQ_ZERO))):
            return RatPoly([c * other for c in self.coeffs])
        if not isinstance(other, RatPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [QQ_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RatPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "RatPoly"):
        if not isinstance(other, RatPoly) or not other:
            raise DomainError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lead = other.coeffs[-1]
        if len(rem) <= dq:
            return RatPoly(), self
        quot = [QQ_ZERO] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if not c:
                continue
            f = c / lead
            quot[i - dq] = f
            for j in range(dq + 1):
                rem[i - dq + j] -= f * other.coeffs[j]
        return RatPoly(quot), RatPoly(rem)

    def exact_div(self, other: "RatPoly") -> "RatPoly":
        q, r = divmod(self, other)
        if r:
            raise DomainError("polynomial division leaves a remainder")
        return q

    def divides(self, other: "RatPoly") -> bool:
        if not self:
            return not other
        return not divmod(other, self)[1]

    def __call__(self, x):
        acc = QQ_ZERO if is_rational_like(x) else x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_json(self):
        return [int(c.numerator) if c.denominator == 1 else qq_str(c)
                for c in self.coeffs]

    @staticmethod
    def from_json(data) -> "RatPoly":
        return RatPoly([qq(c) for c in data])

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                term = qq_str(c)
            else:
                tk = "t" if k == 1 else "t^%d" % k
                if c == 1:
                    term = tk
                elif c == -1:
                    term = "-" + tk
                else:
                    term = "%s*%s" % (qq_str(c), tk)
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __repr__(self):
        return "RatPoly(%s)" % (list(map(qq_str, self.coeffs)),)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> RatPoly:
    """The n-th cyclotomic polynomial, by dividing t^n - 1 by the proper
    cyclotomic factors recursively.

    >>> str(cyclotomic_polynomial(12))
    't^4 - t^2 + 1'
    """
    if n < 1:
        raise UsageError("conductor must be a positive integer")
    num = RatPoly([-1] + [0] * (n - 1) + [1])
    for d in divisors(n):
        if d < n:
            num = num.exact_div(cyclotomic_polynomial(d))
    return num


class RatSeries:
    """Truncated power series over Q: coefficients 0..trunc inclusive."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs, trunc: int):
        if trunc < 0:
            raise UsageError("truncation order must be non-negative")
        cs = [qq(c) for c in coeffs][: trunc + 1]
        cs += [QQ_ZERO] * (trunc + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.trunc = trunc

    @staticmethod
    def from_poly(p: RatPoly, trunc: int) -> "RatSeries":
        return RatSeries(p.coeffs, trunc)

    def coeff(self, k: int) -> QQ:
        if k > self.trunc:
            raise UsageError("coefficient beyond truncation order")
        return self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, RatSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.trunc))

    def _common(self, other):
        if isinstance(other, RatSeries):
            t = min(self.trunc, other.trunc)
            return other, t
        return RatSeries.from_poly(RatPoly([other]), self.trunc), self.trunc

    def __add__(self, other):
        other, t = self._common(other)
        return RatSeries([self.coeffs[i] + other.coeffs[i] for i in range(t + 1)], t)

    __radd__ = __add__

    def __neg__(self):
        return RatSeries([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        other, t = self._common(other)
        return RatSeries([self.coeffs[i] - other.coeffs[i] for i in range(t + 1)], t)

    def __mul__(self, other):
        if isinstance(other, (int, type(QQ_ZERO))):
            return RatSeries([c * other for c in self.coeffs], self.trunc)
        if isinstance(other, RatPoly):
            other = RatSeries.from_poly(other, self.trunc)
        other, t = self._common(other)
        out = [QQ_ZERO] * (t + 1)
        for i in range(t + 1):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(t + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return RatSeries(out, t)

    __rmul__ = __mul__

    def invert(self) -> "RatSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.coeffs[0]
        if not c0:
            raise DomainError("series with zero constant term has no inverse")
        inv0 = 1 / c0
        out = [inv0] + [QQ_ZERO] * self.trunc
        for k in range(1, self.trunc + 1):
            acc = QQ_ZERO
            for j in range(1, k + 1):
                cj = self.coeffs[j]
                if cj:
                    acc += cj * out[k - j]
            out[k] = -inv0 * acc
        return RatSeries(out, self.trunc)

    def divide(self, other: "RatSeries") -> "RatSeries":
        other, _ = self._common(other)
        return self * other.invert()

    def is_polynomial(self) -> bool:
        return True

    def as_poly(self) -> RatPoly:
        return RatPoly(self.coeffs)

    def __str__(self):
        return "%s + O(t^%d)" % (RatPoly(self.coeffs), self.trunc + 1)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# cyclotomic numbers


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[QQ, ...], ...]:
    """Coordinates of zeta_n^k, k in [0, n), on the power basis mod Phi_n."""
    phi = euler_phi(n)
    top = cyclotomic_polynomial(n).coeffs  # monic, length phi+1
    rows = []
    for k in range(phi):
        row = [QQ_ZERO] * phi
        row[k] = QQ_ONE
        rows.append(tuple(row))
    for k in range(phi, n):
        prev = rows[k - 1]
        carry = prev[phi - 1]
        row = [QQ_ZERO] + list(prev[: phi - 1])
        if carry:
            for j in range(phi):
                if top[j]:
                    row[j] -= carry * top[j]
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def _embed_table(m: int, n: int) -> tuple[tuple[QQ, ...], ...]:
    """Images of the Q(zeta_m) power basis inside Q(zeta_n), for m | n."""
    if n % m:
        raise UsageError("no embedding: %d does not divide %d" % (m, n))
    step = n // m
    table = _power_table(n)
    return tuple(table[(k * step) % n] for k in range(euler_phi(m)))


@lru_cache(maxsize=None)
def _subfield_solver(m: int, n: int):
    """Row-reduced system for rewriting a Q(zeta_n) vector in the embedded
    Q(zeta_m) basis; returns (pivot columns, solved rows) or None when the
    embedding matrix is degenerate (never happens for m | n)."""
    basis = _embed_table(m, n)
    phi_m, phi_n = len(basis), euler_phi(n)
    # columns: coordinates in Q(zeta_n); solve x * basis = target
    rows = [list(b) for b in basis]
    pivots = []
    transform = [[QQ_ONE if i == j else QQ_ZERO for j in range(phi_m)]
                 for i in range(phi_m)]
    r = 0
    for c in range(phi_n):
        k = next((i for i in range(r, phi_m) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        transform[r], transform[k] = transform[k], transform[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        transform[r] = [v * inv for v in transform[r]]
        for i in range(phi_m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                transform[i] = [a - f * b for a, b in zip(transform[i], transform[r])]
        pivots.append(c)
        r += 1
        if r == phi_m:
            break
    return pivots, rows, transform


class CycloScalar:
    """An element of the cyclotomic field Q(zeta_n).

    >>> z = CycloScalar.root_of_unity(4)
    >>> (z * z).reduce().order
    1
    >>> z * z == CycloScalar.rational(-1)
    True
    """

    __slots__ = ("order", "coeffs", "_canon")

    def __init__(self, order: int, coeffs):
        if order < 1:
            raise UsageError("conductor must be a positive integer")
        phi = euler_phi(order)
        cs = tuple(qq(c) for c in coeffs)
        if len(cs) != phi:
            raise UsageError(
                "expected %d coefficients for conductor %d, got %d"
                % (phi, order, len(cs)))
        self.order = order
        self.coeffs = cs
        self._canon = None

    # -- constructors

    @staticmethod
    def rational(value) -> "CycloScalar":
        return CycloScalar(1, (qq(value),))

    @staticmethod
    def root_of_unity(n: int, power: int = 1) -> "CycloScalar":
        if n < 1:
            raise UsageError("conductor must be a positive integer")
        row = _power_table(n)[power % n]
        return CycloScalar(n, row)

    @staticmethod
    def coerce(value) -> "CycloScalar":
        if isinstance(value, CycloScalar):
            return value
        if is_rational_like(value) or isinstance(value, str):
            return CycloScalar.rational(qq(value))
        raise UsageError("cannot interpret %r as a cyclotomic scalar" % (value,))

    # -- conductor bookkeeping

    def promote(self, n: int) -> "CycloScalar":
        """Rewrite self inside Q(zeta_n); requires order | n."""
        if n == self.order:
            return self
        table = _embed_table(self.order, n)
        phi = euler_phi(n)
        out = [QQ_ZERO] * phi
        for c, row in zip(self.coeffs, table):
            if c:
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycloScalar(n, out)

    def _try_descend(self, m: int):
        pivots, rows, transform = _subfield_solver(m, self.order)
        vec = self.coeffs
        coords = [QQ_ZERO] * len(pivots)
        residual = list(vec)
        for r, c in enumerate(pivots):
            f = residual[c]
            if f:
                coords[r] = f
                for j in range(len(vec)):
                    if rows[r][j]:
                        residual[j] -= f * rows[r][j]
        if any(residual):
            return None
        basis = _embed_table(m, self.order)
        phi_m = len(basis)
        out = [QQ_ZERO] * phi_m
        for r in range(len(pivots)):
            if coords[r]:
                for j in range(phi_m):
                    if transform[r][j]:
                        out[j] += coords[r] * transform[r][j]
        return CycloScalar(m, out)

    def reduce(self) -> "CycloScalar":
        """Canonical form with minimal conductor (never 2 mod 4)."""
        if self._canon is not None:
            return self._canon
        cur = self
        if cur.order % 4 == 2:
            down = cur._try_descend(cur.order // 2)
            if down is not None:
                cur = down
        changed = True
        while changed and cur.order > 1:
            changed = False
            for p in prime_factors(cur.order):
                m = cur.order // p
                if m % 4 == 2:
                    m //= 2
                if m < 1:
                    continue
                down = cur._try_descend(m)
                if down is not None:
                    cur = down
                    changed = True
                    break
        cur._canon = cur
        self._canon = cur
        return cur

    def is_rational(self) -> bool:
        return self.reduce().order == 1

    def as_rational(self) -> QQ:
        red = self.reduce()
        if red.order != 1:
            raise DomainError("scalar is not rational: %s" % (self,))
        return red.coeffs[0]

    # -- arithmetic

    def _pair(self, other):
        other = CycloScalar.coerce(other)
        if self.order == other.order:
            return self, other
        n = math.lcm(self.order, other.order)
        return self.promote(n), other.promote(n)

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except UsageError:
            return NotImplemented
        return CycloScalar(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except UsageError:
            return NotImplemented
        return CycloScalar(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._pair(other)
        except UsageError:
            return NotImplemented
        n = a.order
        if n == 1:
            return CycloScalar(1, (a.coeffs[0] * b.coeffs[0],))
        phi = len(a.coeffs)
        conv = [QQ_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    conv[i + j] += x * y
        out = list(conv[:phi])
        table = _power_table(n)
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = table[k % n]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycloScalar(n, out)

    __rmul__ = __mul__

    def inv(self) -> "CycloScalar":
        if not any(self.coeffs):
            raise DomainError("cannot invert zero")
        n = self.order
        if n == 1:
            return CycloScalar(1, (1 / self.coeffs[0],))
        # extended Euclid in Q[t] against Phi_n
        r0 = list(cyclotomic_polynomial(n).coeffs)
        r1 = list(self.coeffs)
        while r1 and not r1[-1]:
            r1.pop()
        s0, s1 = [], [QQ_ONE]  # coefficients of Bezout factor for self
        def poly_sub_scaled(a, b, f, shift):
            # a -= f * t^shift * b, in place semantics on a copy
            out = list(a) + [QQ_ZERO] * max(0, len(b) + shift - len(a))
            for i, c in enumerate(b):
                if c:
                    out[i + shift] -= f * c
            while out and not out[-1]:
                out.pop()
            return out
        while r1:
            # divide r0 by r1
            quo_applied_s = list(s0)
            rem = list(r0)
            lead = r1[-1]
            while len(rem) >= len(r1) and rem:
                shift = len(rem) - len(r1)
                f = rem[-1] / lead
                rem = poly_sub_scaled(rem, r1, f, shift)
                quo_applied_s = poly_sub_scaled(quo_applied_s, s1, f, shift)
                while rem and not rem[-1]:
                    rem.pop()
            r0, r1 = r1, rem
            s0, s1 = s1, quo_applied_s
        # r0 = gcd (a nonzero constant since Phi_n is irreducible), s0 its factor
        g = r0[0]
        phi = euler_phi(n)
        out = [c / g for c in s0] + [QQ_ZERO] * (phi - len(s0))
        if len(out) > phi:
            # reduce the Bezout factor mod Phi_n (degree can reach phi)
            extra = out[phi:]
            out = out[:phi]
            table = _power_table(n)
            for k, c in enumerate(extra, start=phi):
                if c:
                    row = table[k % n]
                    for j in range(phi):
                        if row[j]:
                            out[j] += c * row[j]
        return CycloScalar(n, out[:phi])

    def __truediv__(self, other):
        other = CycloScalar.coerce(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return CycloScalar.coerce(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = CycloScalar.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "CycloScalar":
        """Complex conjugation, zeta |-> zeta^(-1)."""
        n = self.order
        if n == 1:
            return self
        table = _power_table(n)
        phi = len(self.coeffs)
        out = [QQ_ZERO] * phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[(n - k) % n]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycloScalar(n, out)

    # -- comparisons, hashing, ordering keys

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, str)) or is_rational_like(other):
            try:
                other = CycloScalar.coerce(other)
            except UsageError:
                return NotImplemented
        if not isinstance(other, CycloScalar):
            return NotImplemented
        if self.order == other.order:
            return self.coeffs == other.coeffs
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        red = self.reduce()
        return hash((red.order, red.coeffs))

    def sort_key(self):
        """Total order key used only for deterministic tie-breaking."""
        red = self.reduce()
        return (red.order,) + tuple(
            (int(c.numerator), int(c.denominator)) for c in red.coeffs)

    # -- serialisation and display

    def to_json(self):
        red = self.reduce()
        return {"order": red.order, "coeffs": [qq_str(c) for c in red.coeffs]}

    @staticmethod
    def from_json(data) -> "CycloScalar":
        if not isinstance(data, dict) or "order" not in data or "coeffs" not in data:
            raise UsageError("scalar JSON needs 'order' and 'coeffs'")
        return CycloScalar(int(data["order"]), [qq(c) for c in data["coeffs"]])

    def __str__(self):
        red = self.reduce()
        if red.order == 1:
            return qq_str(red.coeffs[0])
        parts = []
        for k, c in enumerate(red.coeffs):
            if not c:
                continue
            if k == 0:
                term = qq_str(c)
            else:
                zk = "z%d" % red.order if k == 1 else "z%d^%d" % (red.order, k)
                if c == 1:
                    term = zk
                elif c == -1:
                    term = "-" + zk
                else:
                    term = "%s*%s" % (qq_str(c), zk)
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return "CycloScalar(%d, %s)" % (self.order, [qq_str(c) for c in self.coeffs])


CYC_ZERO = CycloScalar.rational(0)
CYC_ONE = CycloScalar.rational(1)
