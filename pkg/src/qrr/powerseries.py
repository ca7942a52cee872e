"""Truncated formal power series in q with exact rational coefficients.

A series lives in integer powers of u = q^(1/scale).  It stores a dense run of
coefficients starting at ``min_exp`` and a precision ``prec``: every exponent
below ``prec`` (in u units) is known, everything at or above it is unknown.
Series are immutable.
"""

from fractions import Fraction
from math import gcd


class NonUnit(ValueError):
    pass


class InsufficientPrecision(ValueError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


def _norm(x):
    # keep integral values as plain ints; int arithmetic is much faster
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def to_fraction(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def scale_of(*values):
    s = 1
    for v in values:
        s = _lcm(s, Fraction(v).denominator)
    return s


def _check_int(x, what):
    x = Fraction(x)
    if x.denominator != 1:
        raise ValueError(f"{what} {x} is not representable at this scale")
    return x.numerator


# --- integer convolution ------------------------------------------------

_NAIVE_CUTOFF = 24


def _pack(vals, width):
    pos = b"".join((v if v > 0 else 0).to_bytes(width, "little") for v in vals)
    neg = b"".join((-v if v < 0 else 0).to_bytes(width, "little") for v in vals)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _int_convolve(a, b, n):
    """First n coefficients of the product of two integer lists."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return []
    m = min(len(a) + len(b) - 1, n)
    if min(len(a), len(b)) <= _NAIVE_CUTOFF:
        out = [0] * m
        if len(a) > len(b):
            a, b = b, a
        for i, x in enumerate(a):
            if x:
                for j in range(min(len(b), m - i)):
                    out[i + j] += x * b[j]
        return out
    # Kronecker substitution: pack into big integers, let CPython multiply
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * m
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    width = (bits + 7) // 8
    prod = _pack(a, width) * _pack(b, width)
    total = len(a) + len(b) - 1
    half = 1 << (8 * width - 1)
    offset = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * total, "little")
    raw = (prod + offset).to_bytes(total * width + 1, "little")
    return [
        int.from_bytes(raw[i * width:(i + 1) * width], "little") - half
        for i in range(m)
    ]


def _common_denominator(vals):
    d = 1
    for v in vals:
        if type(v) is Fraction:
            d = _lcm(d, v.denominator)
    return d


def _convolve(a, b, n):
    da = _common_denominator(a)
    db = _common_denominator(b)
    if da == 1 and db == 1:
        return _int_convolve(a, b, n)
    ia = [int(x * da) for x in a]
    ib = [int(x * db) for x in b]
    d = da * db
    return [_norm(Fraction(x, d)) if x % d else x // d for x in _int_convolve(ia, ib, n)]


# --- the series type -------------------------------------------------------

class Series:
    __slots__ = ("scale", "min_exp", "_c", "prec")

    def __init__(self, scale, min_exp, coeffs, prec):
        if scale < 1:
            raise ValueError("scale must be positive")
        c = [_norm(x) for x in coeffs]
        # drop anything at or beyond the precision
        keep = prec - min_exp
        if keep < len(c):
            c = c[:max(keep, 0)]
        lo = 0
        while lo < len(c) and c[lo] == 0:
            lo += 1
        hi = len(c)
        while hi > lo and c[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            self.min_exp = prec
            self._c = ()
        else:
            self.min_exp = min_exp + lo
            self._c = tuple(c[lo:hi])
        self.scale = scale
        self.prec = prec

    @classmethod
    def _raw(cls, scale, min_exp, coeffs, prec):
        # trusted fast path; coeffs must already be canonical
        s = object.__new__(cls)
        s.scale = scale
        s.min_exp = min_exp
        s._c = coeffs
        s.prec = prec
        return s

    # --- inspection ---
    @property
    def coeffs(self):
        return tuple(Fraction(x) for x in self._c)

    @property
    def precision(self):
        """Precision as a q-exponent."""
        return Fraction(self.prec, self.scale)

    @property
    def valuation(self):
        """Lowest q-exponent with a nonzero coefficient (precision if zero)."""
        return Fraction(self.min_exp, self.scale)

    def is_zero(self):
        return not self._c

    def coeff(self, e):
        """Coefficient of q^e."""
        u = Fraction(e) * self.scale
        if u.denominator != 1:
            return Fraction(0)
        u = u.numerator
        if u >= self.prec:
            raise InsufficientPrecision(f"q^{e} is beyond precision {self.precision}")
        i = u - self.min_exp
        if 0 <= i < len(self._c):
            return Fraction(self._c[i])
        return Fraction(0)

    def terms(self):
        """(q-exponent, coefficient) pairs of the nonzero coefficients."""
        for i, x in enumerate(self._c):
            if x:
                yield Fraction(self.min_exp + i, self.scale), Fraction(x)

    def integer_coeffs(self, n):
        """Coefficients of q^0 .. q^(n-1) for a scale-1 series with min_exp >= 0."""
        f = self.rescale_down()
        if f.scale != 1:
            raise ValueError("series has fractional exponents")
        if f.prec < n:
            raise InsufficientPrecision(f"need precision {n}, have {f.prec}")
        if f._c and f.min_exp < 0:
            raise ValueError("series has negative exponents")
        out = [Fraction(0)] * n
        for i, x in enumerate(f._c):
            j = f.min_exp + i
            if j < n:
                out[j] = Fraction(x)
        return out

    # --- scale handling ---
    def rescale(self, s):
        if s == self.scale:
            return self
        if s % self.scale:
            raise ValueError(f"cannot move scale {self.scale} to {s}")
        k = s // self.scale
        c = [0] * ((len(self._c) - 1) * k + 1) if self._c else []
        for i, x in enumerate(self._c):
            c[i * k] = x
        return Series._raw(s, self.min_exp * k, tuple(c), self.prec * k)

    def rescale_down(self):
        """Smallest scale that still represents every exponent exactly."""
        g = self.scale
        g = gcd(g, self.prec)
        if self._c:
            g = gcd(g, self.min_exp)
            for i, x in enumerate(self._c):
                if x and g > 1:
                    g = gcd(g, self.min_exp + i)
        if g == 1:
            return self
        return Series(self.scale // g, self.min_exp // g,
                      self._c[::g], self.prec // g)

    def _dense(self, lo, hi):
        """Coefficient list for u-exponents lo .. hi-1."""
        out = [0] * (hi - lo)
        for i, x in enumerate(self._c):
            j = self.min_exp + i - lo
            if 0 <= j < len(out):
                out[j] = x
        return out

    # --- ring operations ---
    def __neg__(self):
        return Series._raw(self.scale, self.min_exp, tuple(-x for x in self._c), self.prec)

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other, self.precision)
        s = _lcm(self.scale, other.scale)
        f, g = self.rescale(s), other.rescale(s)
        prec = min(f.prec, g.prec)
        if not f._c:
            return g.truncate_u(prec)
        if not g._c:
            return f.truncate_u(prec)
        lo = min(f.min_exp, g.min_exp)
        hi = min(max(f.min_exp + len(f._c), g.min_exp + len(g._c)), prec)
        if hi <= lo:
            return Series(s, prec, [], prec)
        c = f._dense(lo, hi)
        for i, x in enumerate(g._c):
            j = g.min_exp + i - lo
            if 0 <= j < len(c):
                c[j] += x
        return Series(s, lo, c, prec)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other, self.precision)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            c = _norm(to_fraction(other))
            if c == 0:
                return Series(self.scale, self.prec, [], self.prec)
            return Series._raw(self.scale, self.min_exp, tuple(_norm(c * x) for x in self._c), self.prec)
        s = _lcm(self.scale, other.scale)
        f, g = self.rescale(s), other.rescale(s)
        prec = min(f.prec + g.min_exp, g.prec + f.min_exp)
        if not f._c or not g._c:
            return Series(s, prec, [], prec)
        lo = f.min_exp + g.min_exp
        c = _convolve(list(f._c), list(g._c), prec - lo)
        return Series(s, lo, c, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * invert(other)
        return self * (1 / to_fraction(other))

    def __pow__(self, n):
        if n < 0:
            return invert(self) ** (-n)
        if n == 0:
            return Series.constant(1, self.precision - self.valuation)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        s = _lcm(self.scale, other.scale)
        f, g = self.rescale(s), other.rescale(s)
        return f.prec == g.prec and f.min_exp == g.min_exp and f._c == g._c

    def __hash__(self):
        f = self.rescale_down()
        return hash((f.scale, f.min_exp, f._c, f.prec))

    def __repr__(self):
        return f"Series({self.to_string(12)})"

    def to_string(self, max_terms=None):
        parts = []
        for k, (e, c) in enumerate(self.terms()):
            if max_terms is not None and k >= max_terms:
                parts.append("...")
                break
            parts.append(_fmt_term(c, e))
        body = " + ".join(parts) if parts else "0"
        body = body.replace("+ -", "- ")
        return f"{body} + O(q^{_fmt_exp(self.precision)})"

    # --- structural helpers ---
    def truncate(self, prec):
        """Lower the precision to q^prec (never raises it)."""
        u = Fraction(prec) * self.scale
        s = self
        if u.denominator != 1:
            s = self.rescale(_lcm(self.scale, u.denominator))
            u = Fraction(prec) * s.scale
        return s.truncate_u(min(int(u), s.prec))

    def truncate_u(self, prec):
        if prec >= self.prec:
            return self
        return Series(self.scale, self.min_exp, self._c, prec)

    def shift(self, coeff, exp):
        """Multiply by the monomial coeff * q^exp."""
        exp = Fraction(exp)
        s = _lcm(self.scale, exp.denominator)
        f = self.rescale(s)
        k = int(exp * s)
        coeff = _norm(to_fraction(coeff))
        if coeff == 0:
            return Series(s, f.prec + k, [], f.prec + k)
        if coeff == 1:
            return Series._raw(s, f.min_exp + k, f._c, f.prec + k)
        return Series._raw(s, f.min_exp + k, tuple(_norm(coeff * x) for x in f._c), f.prec + k)

    def mul_binomial(self, c, e):
        """Multiply by the exact polynomial (1 - c q^e), e > 0."""
        c = _norm(to_fraction(c))
        e = Fraction(e)
        if e <= 0:
            raise ValueError("binomial exponent must be positive")
        s = _lcm(self.scale, e.denominator)
        f = self.rescale(s)
        k = int(e * s)
        if c == 0 or not f._c:
            return f
        n = min(len(f._c) + k, f.prec - f.min_exp)
        out = list(f._c) + [0] * (n - len(f._c))
        out = out[:n]
        src = f._c
        for i in range(n - 1, k - 1, -1):
            j = i - k
            if j < len(src):
                x = src[j]
                if x:
                    out[i] -= c * x
        return Series(s, f.min_exp, out, f.prec)

    def div_binomial(self, c, e):
        """Divide by (1 - c q^e), e > 0."""
        c = _norm(to_fraction(c))
        e = Fraction(e)
        if e <= 0:
            raise ValueError("binomial exponent must be positive")
        s = _lcm(self.scale, e.denominator)
        f = self.rescale(s)
        k = int(e * s)
        if c == 0 or not f._c:
            return f
        n = f.prec - f.min_exp
        out = list(f._c) + [0] * (n - len(f._c))
        if c == 1:
            for i in range(k, n):
                out[i] += out[i - k]
        elif c == -1:
            for i in range(k, n):
                out[i] -= out[i - k]
        else:
            for i in range(k, n):
                x = out[i - k]
                if x:
                    out[i] += c * x
        return Series(s, f.min_exp, out, f.prec)

    @staticmethod
    def constant(c, prec):
        return monomial(c, 0, prec)


def _fmt_exp(e):
    e = Fraction(e)
    return str(e.numerator) if e.denominator == 1 else f"({e})"


def _fmt_term(c, e):
    if e == 0:
        return str(c)
    q = "q" if e == 1 else f"q^{_fmt_exp(e)}"
    if c == 1:
        return q
    if c == -1:
        return "-" + q
    return f"{c}*{q}"


def monomial(c, e, prec):
    """The series c q^e known below q^prec."""
    e = Fraction(e)
    prec = Fraction(prec)
    s = scale_of(e, prec)
    u = int(e * s)
    p = int(prec * s)
    c = to_fraction(c)
    if c == 0 or u >= p:
        return Series(s, p, [], p)
    return Series(s, u, [c], p)


def zero(prec):
    return monomial(0, 0, prec)


def one(prec):
    return monomial(1, 0, prec)


def from_coefficients(coeffs, prec=None, scale=1, min_exp=0):
    """Series with the given coefficients of u^min_exp, u^(min_exp+1), ..."""
    coeffs = list(coeffs)
    if prec is None:
        prec = min_exp + len(coeffs)
    return Series(scale, min_exp, [to_fraction(x) for x in coeffs], prec)


def add(f, g):
    return f + g


def mul(f, g):
    return f * g


def neg(f):
    return -f


def invert_unit(f):
    """Inverse of a series with min_exp 0 and nonzero constant term."""
    if not f._c or f.min_exp != 0:
        raise NonUnit("series must have a nonzero constant term")
    n = f.prec
    a = f._c
    a0 = a[0]
    inv0 = _norm(Fraction(1) / to_fraction(a0))
    out = [0] * n
    out[0] = inv0
    la = len(a)
    # Clear denominators so the recurrence runs on integers when possible.
    if a0 in (1, -1) and all(type(x) is int for x in a):
        for i in range(1, n):
            acc = 0
            for j in range(1, min(i, la - 1) + 1):
                x = a[j]
                if x:
                    acc += x * out[i - j]
            out[i] = -acc * a0
        return Series(f.scale, 0, out, n)
    for i in range(1, n):
        acc = 0
        for j in range(1, min(i, la - 1) + 1):
            x = a[j]
            if x:
                acc += x * out[i - j]
        out[i] = _norm(-acc * inv0)
    return Series(f.scale, 0, out, n)


def invert(f):
    """Inverse of any series with a nonzero leading coefficient."""
    if not f._c:
        raise NonUnit("cannot invert a series that is zero to its precision")
    lead = f.min_exp
    unit = Series._raw(f.scale, 0, f._c, f.prec - lead)
    g = invert_unit(unit)
    return Series._raw(g.scale, g.min_exp - lead, g._c, g.prec - lead)


def substitute_q_power(f, r):
    """f(q^r) for rational r > 0."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("substitution power must be positive")
    # u = q^(1/s) maps to q^(r/s); pick new scale t with r/s = k/t
    x = r / f.scale
    t = x.denominator
    k = x.numerator
    c = [0] * ((len(f._c) - 1) * k + 1) if f._c else []
    for i, v in enumerate(f._c):
        c[i * k] = v
    return Series(t, f.min_exp * k, c, f.prec * k)


def equal_up_to(f, g, order):
    """Compare coefficients of q^e for e < order.

    Returns (True, None) or (False, (e, coeff_f, coeff_g)) for the smallest
    mismatching exponent e.
    """
    order = Fraction(order)
    for h in (f, g):
        if h.precision < order:
            raise InsufficientPrecision(
                f"precision {h.precision} is below requested order {order}")
    s = _lcm(_lcm(f.scale, g.scale), order.denominator)
    a, b = f.rescale(s), g.rescale(s)
    top = int(order * s)
    lo = min(a.min_exp, b.min_exp)
    if lo >= top:
        return True, None
    da = a._dense(lo, top)
    db = b._dense(lo, top)
    for i, (x, y) in enumerate(zip(da, db)):
        if x != y:
            return False, (Fraction(lo + i, s), Fraction(x), Fraction(y))
    return True, None
