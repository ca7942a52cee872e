"""q-Pochhammer symbols, conjugate-pair rewrites and the Jacobi triple product.

Parameters are monomials c*q^e with rational c and e.  Every product is
expanded as a leading monomial times a unit series, so limits such as
(q/a;q)_n a^n at a = 0 are handled by algebra rather than by division.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .powerseries import Series, monomial, to_fraction


class UnsupportedNegativeIndex(ValueError):
    pass


class DivergentProduct(ValueError):
    pass


class PoleInLowerParameter(ZeroDivisionError):
    pass


class NonTerminating(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    exp: Fraction = Fraction(0)

    def __post_init__(self):
        c = to_fraction(self.coeff)
        e = to_fraction(self.exp)
        if c == 0:
            e = Fraction(0)
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "exp", e)

    @classmethod
    def q(cls, e=1, c=1):
        return cls(Fraction(c), Fraction(e))

    def is_zero(self):
        return self.coeff == 0

    def __mul__(self, other):
        if not isinstance(other, Monomial):
            other = Monomial(other)
        return Monomial(self.coeff * other.coeff, self.exp + other.exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Monomial):
            other = Monomial(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero monomial")
        return Monomial(self.coeff / other.coeff, self.exp - other.exp)

    def __rtruediv__(self, other):
        return Monomial(other) / self

    def __neg__(self):
        return Monomial(-self.coeff, self.exp)

    def __pow__(self, n):
        if n < 0 and self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        if n == 0:
            return Monomial(1)
        return Monomial(self.coeff ** n, self.exp * n)

    def root(self, k):
        """Exact k-th root with a rational coefficient, or ValueError."""
        if self.is_zero():
            return self
        c = self.coeff
        sign = 1
        if c < 0:
            if k % 2 == 0:
                raise ValueError(f"{self} has no real {k}-th root")
            sign, c = -1, -c
        num = _int_root(c.numerator, k)
        den = _int_root(c.denominator, k)
        if num is None or den is None:
            raise ValueError(f"{self} has no rational {k}-th root")
        return Monomial(sign * Fraction(num, den), self.exp / k)

    def series(self, prec):
        return monomial(self.coeff, self.exp, prec)

    def __str__(self):
        return format_monomial(self)

    def __repr__(self):
        return f"Monomial({format_monomial(self)})"


def _int_root(n, k):
    r = round(n ** (1.0 / k)) if n else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


ZERO = Monomial(0)
ONE = Monomial(1)


def as_monomial(x):
    if isinstance(x, Monomial):
        return x
    if isinstance(x, str):
        return parse_monomial(x)
    return Monomial(x)


_MONO_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<coeff>\d+(?:/\d+)?|\(\d+/\d+\))?\s*\*?\s*"
    r"(?:(?P<q>q)(?:\^(?P<exp>-?\d+(?:/\d+)?|\(-?\d+(?:/\d+)?\)))?)?\s*$")


def parse_monomial(text):
    """Parse forms such as 0, -1, q, -q^2, q^1/2, 3q^-1, (1/2)q^3."""
    m = _MONO_RE.match(text)
    if not m or (m.group("coeff") is None and m.group("q") is None):
        raise ValueError(f"not a monomial: {text!r}")
    coeff = Fraction(m.group("coeff").strip("()")) if m.group("coeff") else Fraction(1)
    if m.group("sign") == "-":
        coeff = -coeff
    exp = Fraction(0)
    if m.group("q"):
        exp = Fraction(m.group("exp").strip("()")) if m.group("exp") else Fraction(1)
    return Monomial(coeff, exp)


def format_monomial(m):
    if m.coeff == 0:
        return "0"
    if m.exp == 0:
        return str(m.coeff)
    c = m.coeff
    if c == 1:
        head = ""
    elif c == -1:
        head = "-"
    elif c.denominator == 1:
        head = str(c)
    else:
        head = f"({c})"
    e = m.exp
    tail = "q" if e == 1 else f"q^{e}"
    return head + tail


# --- linear factors --------------------------------------------------------

def split_difference(x, y):
    """Write x - y as lead * (1 - c q^e) with e > 0.

    Returns (lead, c, e); c is None when x - y is itself a monomial.
    """
    if y.is_zero():
        return x, None, None
    if x.is_zero():
        return -y, None, None
    if x.exp == y.exp:
        return Monomial(x.coeff - y.coeff, x.exp), None, None
    if x.exp < y.exp:
        return x, y.coeff / x.coeff, y.exp - x.exp
    return -y, x.coeff / y.coeff, x.exp - y.exp


class Product:
    """Running product lead * unit, where unit is a series with constant term 1.

    Used as a mutable accumulator inside the summation loops; the Series it
    carries are themselves immutable.
    """

    __slots__ = ("lead", "unit", "zero")

    def __init__(self, prec):
        self.lead = ONE
        self.unit = monomial(1, 0, prec)
        self.zero = False

    def copy(self):
        p = Product.__new__(Product)
        p.lead, p.unit, p.zero = self.lead, self.unit, self.zero
        return p

    def times(self, x, y, power=1):
        """Multiply by (x - y)^power, power = +1 or -1."""
        lead, c, e = split_difference(x, y)
        if lead.is_zero():
            if power < 0:
                raise PoleInLowerParameter(f"zero factor ({x}) - ({y}) in a denominator")
            self.zero = True
            return
        if power > 0:
            self.lead = self.lead * lead
            if c is not None:
                self.unit = self.unit.mul_binomial(c, e)
        else:
            self.lead = self.lead / lead
            if c is not None:
                self.unit = self.unit.div_binomial(c, e)

    def times_monomial(self, m):
        if m.is_zero():
            self.zero = True
        else:
            self.lead = self.lead * m

    def series(self, prec):
        """The product as a series known below q^prec."""
        if self.zero:
            return monomial(0, 0, prec)
        rel = Fraction(prec) - self.lead.exp
        u = self.unit.truncate(rel) if rel < self.unit.precision else self.unit
        if rel > self.unit.precision:
            raise ValueError("running product was built with too little precision")
        return u.shift(self.lead.coeff, self.lead.exp)


def lead_of_difference(x, y):
    lead, _, _ = split_difference(x, y)
    return lead


# --- factor families for summation loops ----------------------------------

class Family:
    """A product prod_{k < L(n)} f_k whose length L depends on the summation index.

    ``factors(k)`` returns a list of (x, y, power) triples, the k-th factor
    being the product of (x - y)^power.  ``qq_form`` marks the (q;q) shape for
    which length -1 means the empty product.
    """

    def __init__(self, factors, length, qq_form=False):
        self.factors = factors
        self.length = length
        self.qq_form = qq_form


def _qk(m, k, step):
    return Monomial(m.coeff, m.exp + k * step) if not m.is_zero() else m


def poch_family(a, step, length, power=1):
    a = as_monomial(a)
    step = Fraction(step)
    qq = a.coeff == 1 and a.exp == step
    return Family(lambda k: [(ONE, _qk(a, k, step), power)], length, qq)


def scaled_family(c, a, step, length, power=1):
    """Factors (a - c q^(k step))."""
    a = as_monomial(a)
    c = as_monomial(c)
    step = Fraction(step)
    qq = a == ONE and c.coeff == 1 and c.exp == step
    return Family(lambda k: [(a, _qk(c, k, step), power)], length, qq)


def omega_family(x, step, length, power=1):
    """Factors (1 - w x_k)(1 - w^2 x_k) = 1 + x_k + x_k^2 with x_k = x q^(k step).

    Here w is a primitive cube root of unity; the product is rational.
    """
    x = as_monomial(x)
    step = Fraction(step)

    def factors(k):
        xk = _qk(x, k, step)
        if xk == ONE:
            return [(Monomial(3), ZERO, power)]
        return [(ONE, xk ** 3, power), (ONE, xk, -power)]
    return Family(factors, length)


def _family_steps(fam, old, new):
    """Triples to apply when the length moves from old (None = fresh) to new."""
    out = []
    if old is None:
        if new == -1:
            if not fam.qq_form:
                out.extend((x, y, -p) for x, y, p in fam.factors(-1))
            return out
        old = 0
    elif old == -1:
        if not fam.qq_form:
            out.extend(fam.factors(-1))
        old = 0
    if new < old:
        raise ValueError("family lengths must be nondecreasing")
    for k in range(old, new):
        out.extend(fam.factors(k))
    return out


def _lead_of_triples(triples):
    lead = ONE
    for x, y, p in triples:
        m = lead_of_difference(x, y)
        if m.is_zero():
            if p < 0:
                raise PoleInLowerParameter(f"zero factor ({x}) - ({y}) in a denominator")
            return None
        lead = lead * m if p > 0 else lead / m
    return lead


def qsum(order, families=(), lead=None, extras=None, inner=None, start=0,
         max_terms=None, constant=None):
    """Sum over n >= start of lead(n) * prod(families at n) * extras(n) * inner(n).

    ``order`` is the q-precision of the result.  ``inner(n, prec)`` returns a
    Series needed below q^prec.  The loop stops once the numerator products
    vanish identically or two consecutive terms start at or beyond q^order.
    """
    order = Fraction(order)
    if max_terms is None:
        max_terms = int(64 * max(order, 1)) + 64
    # pass 1: leading exponents only, to size the working precision
    lengths = [None] * len(families)
    fam_lead = ONE
    plan = []
    past = 0
    n = start
    dead = False
    while True:
        if n - start > max_terms:
            raise NonTerminating("summation does not terminate within the precision")
        for i, fam in enumerate(families):
            L = fam.length(n)
            if L < -1:
                raise UnsupportedNegativeIndex(f"product length {L} at n={n}")
            steps = _family_steps(fam, lengths[i], L)
            lengths[i] = L
            m = _lead_of_triples(steps)
            if m is None:
                dead = True
                break
            fam_lead = fam_lead * m
        if dead:
            break
        total = fam_lead * (lead(n) if lead else ONE)
        ex = extras(n) if extras else []
        m = _lead_of_triples(ex)
        if m is None or total.is_zero():
            # a vanishing term says nothing about where the tail starts
            plan.append((n, None, None))
            n += 1
            continue
        total = total * m
        inn = None
        v = Fraction(0)
        if inner is not None:
            inn = inner(n, order - total.exp)
            if inn.is_zero():
                v = None
            else:
                v = inn.valuation
        if v is None:
            # an inner factor known to be zero below q^(order - lead) only
            # counts toward the stop once the lead itself is past the order
            plan.append((n, None, None))
            n += 1
            if total.exp >= order:
                past += 1
                if past >= 2:
                    break
            continue
        eff = total.exp + v
        plan.append((n, total, inn))
        if eff >= order:
            past += 1
            if past >= 2:
                break
        else:
            past = 0
        n += 1
    live = [(n, t, inn) for n, t, inn in plan if t is not None and
            t.exp + (inn.valuation if inn is not None else 0) < order]
    result = monomial(0, 0, order)
    if constant is not None:
        result = result + (constant.series(order) if isinstance(constant, Monomial) else constant)
    if not live:
        return result
    rel = max(order - t.exp - (inn.valuation if inn is not None else 0) for _, t, inn in live)
    # pass 2: build the unit parts incrementally at the working precision
    lengths = [None] * len(families)
    run = Product(rel)
    wanted = {n: (t, inn) for n, t, inn in live}
    last = live[-1][0]
    for n in range(start, last + 1):
        for i, fam in enumerate(families):
            L = fam.length(n)
            for x, y, p in _family_steps(fam, lengths[i], L):
                run.times(x, y, p)
            lengths[i] = L
        if n not in wanted:
            continue
        t, inn = wanted[n]
        v = inn.valuation if inn is not None else Fraction(0)
        need = order - t.exp - v
        unit = run.unit.truncate(need)
        for x, y, p in (extras(n) if extras else []):
            _, c, e = split_difference(x, y)
            if c is not None:
                unit = unit.mul_binomial(c, e) if p > 0 else unit.div_binomial(c, e)
        if inn is not None:
            unit = unit * inn
        result = result + unit.shift(t.coeff, t.exp)
    return result


# --- Pochhammer symbols ----------------------------------------------------

def _const(n):
    return lambda _n: n


def poch_finite(a, qstep, n, prec):
    """(a; q^qstep)_n for n >= -1; n = -1 only in the (q;q) form."""
    a = as_monomial(a)
    qstep = Fraction(qstep)
    if qstep <= 0:
        raise ValueError("qstep must be positive")
    if n < -1:
        raise UnsupportedNegativeIndex(f"length {n} is not supported")
    if n == -1:
        if a.coeff == 1 and a.exp == qstep:
            return monomial(1, 0, prec)
        raise UnsupportedNegativeIndex("length -1 is only defined for the (q;q) form")
    p = Product(Fraction(prec) + _max_neg_lead(a, qstep, n))
    for k in range(n):
        p.times(ONE, _qk(a, k, qstep))
        if p.zero:
            break
    return p.series(prec)


def _max_neg_lead(a, qstep, n):
    # headroom for leading monomials with negative exponents
    total = Fraction(0)
    for k in range(n):
        e = a.exp + k * qstep
        if not a.is_zero() and e < 0:
            total -= e
    return total


def poch_inf(a, qstep, prec):
    """(a; q^qstep)_oo truncated below q^prec."""
    a = as_monomial(a)
    qstep = Fraction(qstep)
    prec = Fraction(prec)
    if qstep <= 0:
        raise ValueError("qstep must be positive")
    if a.is_zero():
        return monomial(1, 0, prec)
    if a.exp < 0:
        raise DivergentProduct(f"({a}; q^{qstep})_oo has a factor of negative degree")
    if a.exp == 0 and a.coeff == 1:
        return monomial(0, 0, prec)
    p = Product(prec)
    k = 0
    while a.exp + k * qstep < prec:
        p.times(ONE, _qk(a, k, qstep))
        k += 1
    return p.series(prec)


def poch_inf_inverse(a, qstep, prec):
    """1/(a; q^qstep)_oo truncated below q^prec."""
    a = as_monomial(a)
    qstep = Fraction(qstep)
    prec = Fraction(prec)
    if a.is_zero():
        return monomial(1, 0, prec)
    if a.exp < 0:
        raise DivergentProduct(f"({a}; q^{qstep})_oo has a factor of negative degree")
    if a.exp == 0 and a.coeff == 1:
        raise PoleInLowerParameter("1/(1; q)_oo is infinite")
    p = Product(prec)
    k = 0
    while a.exp + k * qstep < prec:
        p.times(ONE, _qk(a, k, qstep), -1)
        k += 1
    return p.series(prec)


def poch_scaled(c, a, qstep, n, prec):
    """prod_{k<n} (a - c q^(k qstep)); equals a^n (c/a; q^qstep)_n when a != 0."""
    a = as_monomial(a)
    c = as_monomial(c)
    qstep = Fraction(qstep)
    p = Product(_scaled_headroom(c, a, qstep, n, prec))
    for k in range(n):
        p.times(a, _qk(c, k, qstep))
        if p.zero:
            break
    return p.series(prec)


def _scaled_headroom(c, a, qstep, n, prec):
    lead = ONE
    for k in range(n):
        m = lead_of_difference(a, _qk(c, k, qstep))
        if m.is_zero():
            return Fraction(prec)
        lead = lead * m
    return Fraction(prec) - lead.exp


def pair_pm(beta_sq, qstep, n, prec):
    """(b, -b; q^qstep)_n written as (b^2; q^(2 qstep))_n."""
    return poch_finite(as_monomial(beta_sq), 2 * Fraction(qstep), n, prec)


def pair_omega(m, qstep, n, prec):
    """(w q^m, w^2 q^m; q^qstep)_n = prod_{k<n} (1 + q^j + q^2j), j = (m+k) qstep."""
    m = Fraction(m)
    if m < 0:
        raise ValueError("m must be nonnegative")
    fam = omega_family(Monomial(1, m * Fraction(qstep)), qstep, _const(n))
    p = Product(Fraction(prec))
    for x, y, pw in _family_steps(fam, None, n):
        p.times(x, y, pw)
    return p.series(prec)


# --- Jacobi triple product -------------------------------------------------

def triple_product_rhs(z, qstep, prec):
    """(-z, -q^qstep/z, q^qstep; q^qstep)_oo."""
    z = as_monomial(z)
    qstep = Fraction(qstep)
    if z.is_zero():
        raise DivergentProduct("z must be nonzero")
    w = Monomial(-1, qstep) / z
    if z.exp < 0 or w.exp < 0:
        raise DivergentProduct(f"triple product diverges for z = {z}")
    out = poch_inf(-z, qstep, prec)
    if out.is_zero():
        return out
    out = out * poch_inf(w, qstep, prec)
    if out.is_zero():
        return out
    return out * poch_inf(Monomial(1, qstep), qstep, prec)


def theta_sum_lhs(z, qstep, prec):
    """Bilateral sum of q^(qstep (n^2-n)/2) z^n below q^prec."""
    z = as_monomial(z)
    qstep = Fraction(qstep)
    prec = Fraction(prec)
    if z.is_zero():
        raise ValueError("z must be nonzero")

    def exp_at(n):
        return qstep * (n * n - n) / 2 + n * z.exp

    terms = {}
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        past = 0
        prev = None
        while True:
            e = exp_at(n)
            if e < prec:
                key = e
                terms[key] = terms.get(key, 0) + z.coeff ** n
                past = 0
            elif prev is not None and e > prev:
                past += 1
                if past >= 2:
                    break
            prev = e
            n += direction
    out = monomial(0, 0, prec)
    for e, c in terms.items():
        if c:
            out = out + monomial(c, e, prec)
    return out
