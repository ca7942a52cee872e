"""Both sides of the parameterized transformation formulas as Series builders.

Every builder works in the theorem's own variable q.  A parameter set to 0
is handled through the scaled products prod (a - c q^k), so the a -> 0 and
b -> 0 limits are exact.  Conjugate pairs enter through their rational
symmetric functions: (b, -b; Q)_n = (b^2; Q^2)_n and
(w x, w^2 x; Q)_n = prod (1 + x_k + x_k^2).
"""

import enum
import inspect
from fractions import Fraction

from .hypergeometric import PhiSpec, phi, _ratio
from .powerseries import Series, monomial
from .qobjects import (
    ONE, ZERO, DivergentProduct, Monomial, as_monomial, format_monomial,
    lead_of_difference,
    omega_family, poch_family, poch_inf, poch_inf_inverse, qsum, scaled_family,
)


class TheoremId(enum.Enum):
    LIU_MASTER = "LIU_MASTER"
    LIU_5PHI4 = "LIU_5PHI4"
    LIU_3PHI2 = "LIU_3PHI2"
    CHU_REDUCED = "CHU_REDUCED"
    HARSH_A = "HARSH_A"
    HARSH_B = "HARSH_B"
    PFAFF_REDUCED = "PFAFF_REDUCED"
    WHIPPLE_A = "WHIPPLE_A"
    WHIPPLE_B = "WHIPPLE_B"
    WHIPPLE_C = "WHIPPLE_C"
    WHIPPLE_D = "WHIPPLE_D"
    WHIPPLE_E = "WHIPPLE_E"
    VERMA_A = "VERMA_A"
    VERMA_B = "VERMA_B"
    ANDREWS_WC = "ANDREWS_WC"
    ANDREWS_STRANGE = "ANDREWS_STRANGE"
    ROOT_UNITY = "ROOT_UNITY"
    ALPHA_Q3 = "ALPHA_Q3"

    @classmethod
    def parse(cls, text):
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"unknown theorem id {text!r}") from None


SYMBOLS = ("a", "b", "c", "d", "e", "h", "alpha", "beta", "gamma", "lam", "beta2")

_AB = ("a", "b")
REQUIRED = {
    TheoremId.LIU_MASTER: ("alpha",) + _AB,
    TheoremId.LIU_5PHI4: ("alpha",) + _AB + ("beta", "gamma", "lam", "c", "d", "e", "h"),
    TheoremId.LIU_3PHI2: ("alpha",) + _AB + ("beta", "c", "d"),
    TheoremId.CHU_REDUCED: ("alpha",) + _AB + ("c",),
    TheoremId.HARSH_A: _AB,
    TheoremId.HARSH_B: _AB,
    TheoremId.PFAFF_REDUCED: ("alpha",) + _AB + ("c", "d"),
    TheoremId.WHIPPLE_A: _AB,
    TheoremId.WHIPPLE_B: _AB,
    TheoremId.WHIPPLE_C: _AB,
    TheoremId.WHIPPLE_D: _AB,
    TheoremId.WHIPPLE_E: _AB + ("c", "beta2"),
    TheoremId.VERMA_A: _AB,
    TheoremId.VERMA_B: ("alpha", "beta") + _AB,
    TheoremId.ANDREWS_WC: ("alpha", "beta2") + _AB,
    TheoremId.ANDREWS_STRANGE: ("alpha",) + _AB,
    TheoremId.ROOT_UNITY: _AB,
    TheoremId.ALPHA_Q3: _AB,
}


class MissingParameter(KeyError):
    pass


class ParamAssignment:
    """Immutable map from parameter symbols to monomials."""

    def __init__(self, values=None, **kw):
        data = dict(values or {})
        data.update(kw)
        for k in data:
            if k not in SYMBOLS:
                raise ValueError(f"unknown parameter symbol {k!r}")
        self._d = {k: as_monomial(v) for k, v in data.items()}

    @classmethod
    def parse(cls, text):
        """Parse 'alpha=-1 c=-q^2 a=0 b=0'."""
        values = {}
        for tok in text.split():
            key, sep, val = tok.partition("=")
            if not sep:
                raise ValueError(f"expected key=value, got {tok!r}")
            values[key] = val
        return cls(values)

    def __getitem__(self, key):
        try:
            return self._d[key]
        except KeyError:
            raise MissingParameter(key) from None

    def __contains__(self, key):
        return key in self._d

    def __iter__(self):
        return iter(self._d)

    def items(self):
        return self._d.items()

    def replace(self, **kw):
        d = dict(self._d)
        d.update({k: as_monomial(v) for k, v in kw.items()})
        return ParamAssignment(d)

    def __eq__(self, other):
        return isinstance(other, ParamAssignment) and self._d == other._d

    def __hash__(self):
        return hash(tuple(sorted(self._d.items(), key=lambda kv: kv[0])))

    def __str__(self):
        return " ".join(f"{k}={format_monomial(v)}" for k, v in self._d.items())

    def __repr__(self):
        return f"ParamAssignment({self})"


def check_params(tid, p):
    missing = [k for k in REQUIRED[tid] if k not in p]
    if missing:
        raise MissingParameter(f"{tid.value} needs {', '.join(missing)}")


# --- building blocks -------------------------------------------------------

def _q(e, c=1):
    return Monomial(c, e)


def _n(n):
    return n


def _lin(k, c=0):
    return lambda n: k * n + c


def _ab(a, b, step, L=_n):
    """(Q/a, Q/b; Q)_L (ab)^L with Q = q^step."""
    Q = _q(step)
    return [scaled_family(Q, a, step, L), scaled_family(Q, b, step, L)]


def _num(xs, step, L=_n):
    return [poch_family(x, step, L) for x in xs]


def _den(xs, step, L=_n):
    return [poch_family(x, step, L, -1) for x in xs]


def _wp(x, step, L=_n):
    """(1 - x Q^(2L)) (x; Q)_L / (1 - x), regular at x = 1.

    Written as (1 - x Q^(2L)) (xQ; Q)_(L-1) for L >= 1 and 1 for L = 0.
    Returns (families, extras).
    """
    x = as_monomial(x)
    step = Fraction(step)
    fam = poch_family(x * _q(step), step, lambda n: max(L(n) - 1, 0))

    def extras(n):
        m = L(n)
        return [(ONE, x * _q(2 * step * m), 1)] if m >= 1 else []
    return [fam], extras


def _plus(m):
    """The factor (1 + q^m) as an extras triple."""
    return (ONE, Monomial(-1, m), 1)


def _minus(m):
    return (ONE, Monomial(1, m), 1)


def _join(*fs):
    fs = [f for f in fs if f is not None]

    def extras(n):
        out = []
        for f in fs:
            out.extend(f(n))
        return out
    return extras


def _prefactor(prec, num, den, step):
    """prod (x; Q)_oo over num divided by prod over den."""
    out = monomial(1, 0, prec)
    for x in num:
        out = out * poch_inf(x, step, prec)
        if out.is_zero():
            return out
    for x in den:
        out = out * poch_inf_inverse(x, step, prec)
    return out


def _need_small(z, what):
    z = as_monomial(z)
    if not z.is_zero() and z.exp <= 0:
        raise DivergentProduct(f"{what} = {z} must have positive degree")


def _liu_prefactor(p, step, prec):
    alpha, a, b = p["alpha"], p["a"], p["b"]
    Q = _q(step)
    return _prefactor(prec, [alpha * Q, alpha * a * b / Q], [alpha * a, alpha * b], step)


def _pref_q2(a, b, prec, step=2):
    """(Q, ab; Q)_oo / (aQ, bQ; Q)_oo, the alpha = Q case of the Liu prefactor."""
    Q = _q(step)
    return _prefactor(prec, [Q, a * b], [a * Q, b * Q], step)


# --- the general formulas --------------------------------------------------

def _liu_rhs_outer(alpha, a, b, prec, inner, with_b=True):
    """Sum of the well-poised outer terms times inner(n, prec)."""
    wpf, wpe = _wp(alpha, 1)
    fams = wpf + [scaled_family(_q(1), a, 1, _n)]
    if with_b:
        fams.append(scaled_family(_q(1), b, 1, _n))
    fams += _den([_q(1), alpha * a, alpha * b], 1)
    return qsum(prec, fams, lambda n: Monomial((-alpha.coeff) ** n,
                                               alpha.exp * n + Fraction(n * (n - 3), 2)),
                wpe, inner=inner)


def _hyper_lhs(p, step, upper, lower, prec):
    """sum (Q/a, Q/b, upper; Q)_n / (Q, lower; Q)_n (alpha ab / Q)^n."""
    alpha = p["alpha"]
    _need_small(alpha * p["a"] * p["b"] / _q(step), "alpha a b / q")
    fams = _ab(p["a"], p["b"], step) + _num(upper, step) + _den([_q(step)] + list(lower), step)
    z = alpha / _q(step)
    return qsum(prec, fams, lambda n: z ** n)


def _liu_phi(p, upper, lower, prec):
    alpha = p["alpha"]
    pref = lambda pr: _liu_prefactor(p, 1, pr)
    lhs = _hyper_lhs(p, 1, upper, lower, prec)

    def inner(n, pr):
        spec = PhiSpec((_q(-n), alpha * _q(n)) + tuple(upper), tuple(lower), 1, _q(1))
        return phi(spec, pr)
    rhs = _liu_rhs_outer(alpha, p["a"], p["b"], prec, inner)
    return pref, lhs, rhs


def _as_term(x, prec):
    if isinstance(x, Series):
        return x
    return as_monomial(x).series(prec)


def _sequence(A):
    """Return seq(k, prec) for a sequence or a callable A(k) / A(k, prec)."""
    if not callable(A):
        return lambda k, prec: _as_term(A[k], prec)
    try:
        takes_prec = len(inspect.signature(A).parameters) >= 2
    except (TypeError, ValueError):
        takes_prec = False
    cache = {}

    def seq(k, prec):
        hit = cache.get(k)
        if hit is None or hit.precision < prec:
            hit = _as_term(A(k, prec) if takes_prec else A(k), prec)
            cache[k] = hit
        return hit
    return seq


def _lead_exp(pairs, lead):
    e = lead.exp
    for x, y in pairs:
        m = lead_of_difference(x, y)
        if m.is_zero():
            return None
        e += m.exp
    return e


def liu_parts(A, alpha, a, b, prec):
    """(prefactor, sum A_n (q/a;q)_n (alpha a)^n, double-sum side).

    The prefactor is returned as a function of the precision.
    """
    alpha, a, b = as_monomial(alpha), as_monomial(a), as_monomial(b)
    seq = _sequence(A)
    p = ParamAssignment(alpha=alpha, a=a, b=b)
    pref = lambda pr: _liu_prefactor(p, 1, pr)
    lhs = qsum(prec, [scaled_family(_q(1), a, 1, _n)], lambda n: alpha ** n, inner=seq)

    def inner(n, pr):
        out = monomial(0, 0, pr)
        for k in range(n + 1):
            num = [(ONE, _q(i - n)) for i in range(k)]
            num += [(ONE, alpha * _q(n + i)) for i in range(k)]
            num += [(b, _q(j + 1)) for j in range(k, n)]
            e = _lead_exp(num, _q(2 * k))
            if e is None:
                continue
            Ak = seq(k, pr - e)
            if Ak.is_zero():
                continue
            t = _ratio(pr - Ak.valuation, num, [], _q(2 * k))
            out = out + (t * Ak).truncate(pr)
        return out
    rhs = _liu_rhs_outer(alpha, a, b, prec, inner, with_b=False)
    return pref, lhs, rhs


def liu_general(A, alpha, a, b, prec):
    """Both sides of the master transformation for a coefficient sequence A."""
    pref, s, rhs = _finish(liu_parts(A, alpha, a, b, prec), prec)
    return _times(pref, s, prec), rhs


def _finish(parts, prec):
    """Evaluate the lazy prefactor with enough room for the sum's valuation."""
    pref, s, rhs = parts
    room = Fraction(prec)
    if not s.is_zero() and s.valuation < 0:
        room -= s.valuation
    return pref(room), s, rhs


def _times(pref, s, prec):
    if s.is_zero() or pref.is_zero():
        return monomial(0, 0, prec)
    return (pref * s).truncate(prec)


# --- per-theorem builders ----------------------------------------------------

def _liu_5phi4(p, prec):
    return _liu_phi(p, [p["beta"], p["gamma"], p["lam"]],
                    [p["c"], p["d"], p["e"], p["h"]], prec)


def _liu_3phi2(p, prec):
    return _liu_phi(p, [p["beta"]], [p["c"], p["d"]], prec)


def _chu(p, prec):
    alpha, a, b, c = p["alpha"], p["a"], p["b"], p["c"]
    pref = lambda pr: _liu_prefactor(p, 2, pr)
    lhs = _hyper_lhs(p, 2, [], [c], prec)
    wpf, wpe = _wp(alpha, 2)
    fams = wpf + _ab(a, b, 2) + [scaled_family(alpha * _q(2), c, 2, _n)]
    fams += _den([_q(2), alpha * a, alpha * b, c], 2)
    rhs = qsum(prec, fams, lambda n: Monomial(alpha.coeff ** n, alpha.exp * n + 2 * n * n - 4 * n),
               wpe)
    return pref, lhs, rhs


def _ab_ratio(a, b, step, L=_n, shift=None):
    """(Q/a, Q/b; Q)_L (ab)^L / (s a, s b; Q)_L with s = Q unless given."""
    s = _q(step) if shift is None else shift
    return _ab(a, b, step, L) + _den([a * s, b * s], step, L)


def _q2_lhs(a, b, den_fams, prec, step=2, extra_num=()):
    _need_small(a * b, "ab")
    fams = _ab(a, b, step) + list(extra_num) + list(den_fams)
    return qsum(prec, fams, lambda n: ONE)


def _parity_rhs(a, b, prec, even, odd, even_x=None, odd_x=None):
    """sum over m of sign * q^E * (extras) * (Q/a, Q/b)_m (ab)^m / (aQ, bQ)_m, Q = q^2.

    ``even(n)``/``odd(n)`` give (coefficient, exponent) for m = 2n and 2n + 1.
    """
    def lead(m):
        n, r = divmod(m, 2)
        c, e = (even if r == 0 else odd)(n)
        return Monomial(c, e)

    def extras(m):
        n, r = divmod(m, 2)
        f = even_x if r == 0 else odd_x
        return f(n) if f else []
    return qsum(prec, _ab_ratio(a, b, 2), lead, extras)


def _harsh_a(p, prec):
    a, b = p["a"], p["b"]
    pref = lambda pr: (_prefactor(pr, [_q(4), a * b], [_q(2, -1), a * _q(2), b * _q(2)], 2)
                       * poch_inf_inverse(_q(2), 4, pr))
    lhs = _q2_lhs(a, b, _den([_q(2), _q(3), _q(3, -1)], 2), prec)
    rhs = _parity_rhs(a, b, prec,
                      lambda n: ((-1) ** n, 6 * n * n + 2 * n),
                      lambda n: (-(-1) ** n, 6 * n * n + 10 * n + 4))
    return pref, lhs, rhs


def _harsh_b(p, prec):
    a, b = p["a"], p["b"]
    pref = lambda pr: _pref_q2(a, b, pr)
    den = _den([_q(1, -1), _q(2)], 2) + _den([_q(1)], 2, _lin(1, 1))
    lhs = _q2_lhs(a, b, den, prec)
    rhs = _parity_rhs(a, b, prec,
                      lambda n: ((-1) ** n, 6 * n * n + 2 * n),
                      lambda n: (-(-1) ** n, 6 * n * n + 6 * n + 1),
                      lambda n: [_plus(4 * n + 1)],
                      lambda n: [_plus(4 * n + 3)])
    return pref, lhs, rhs


def _pfaff(p, prec):
    alpha, a, b, c, d = p["alpha"], p["a"], p["b"], p["c"], p["d"]
    pref = lambda pr: _liu_prefactor(p, 1, pr)
    lhs = _hyper_lhs(p, 1, [alpha * c * d / _q(1)], [alpha * c, alpha * d], prec)
    wpf, wpe = _wp(alpha, 1)
    Q = _q(1)
    fams = wpf + _ab(a, b, 1) + [scaled_family(Q, c, 1, _n), scaled_family(Q, d, 1, _n)]
    fams += _den([Q, alpha * a, alpha * b, alpha * c, alpha * d], 1)
    a2 = alpha * alpha
    rhs = qsum(prec, fams, lambda n: Monomial((-a2.coeff) ** n,
                                               a2.exp * n + Fraction(n * (n - 5), 2)), wpe)
    return pref, lhs, rhs


def _whipple_simple(den, sign_exp, factor):
    """Theorems whose right side is sum (-1)^n factor(n) [..]_n q^E(n)."""
    def build(p, prec):
        a, b = p["a"], p["b"]
        pref = lambda pr: _pref_q2(a, b, pr)
        lhs = _q2_lhs(a, b, den(), prec)
        rhs = qsum(prec, _ab_ratio(a, b, 2), lambda n: Monomial((-1) ** n, sign_exp(n)),
                   lambda n: [factor(n)])
        return pref, lhs, rhs
    return build


_whipple_a = _whipple_simple(
    lambda: _den([_q(2, -1), _q(2), _q(1, -1)], 2),
    lambda n: Fraction(3 * n * n - n, 2), lambda n: _minus(4 * n + 2))

_whipple_b = _whipple_simple(
    lambda: _den([_q(2, -1), _q(2)], 2) + _den([_q(1, -1)], 2, _lin(1, 1)),
    lambda n: Fraction(3 * n * n + n, 2), lambda n: _minus(2 * n + 1))


def _whipple_c(p, prec):
    a, b = p["a"], p["b"]
    pref = lambda pr: _pref_q2(a, b, pr)
    lhs = _q2_lhs(a, b, _den([_q(2, -1), _q(2)], 2) + _den([_q(1)], 2, _lin(1, 1)), prec)
    rhs = _parity_rhs(a, b, prec,
                      lambda n: ((-1) ** n, 6 * n * n + n),
                      lambda n: (-(-1) ** n, 6 * n * n + 7 * n + 2),
                      lambda n: [_plus(4 * n + 1)],
                      lambda n: [_plus(4 * n + 3)])
    return pref, lhs, rhs


def _whipple_d(p, prec):
    a, b = p["a"], p["b"]
    pref = lambda pr: _pref_q2(a, b, pr)
    lhs = _q2_lhs(a, b, _den([_q(1), _q(2), _q(2, -1)], 2), prec)
    rhs = _parity_rhs(a, b, prec,
                      lambda n: ((-1) ** n, 6 * n * n - n),
                      lambda n: ((-1) ** n, 6 * n * n + 5 * n + 1),
                      lambda n: [_minus(8 * n + 2)],
                      lambda n: [_minus(8 * n + 6)])
    return pref, lhs, rhs


def _whipple_e(p, prec):
    a, b, c, b2 = p["a"], p["b"], p["c"], p["beta2"]
    pref = lambda pr: _pref_q2(a, b, pr)
    t = b2 * _q(2) / c
    lhs = _q2_lhs(a, b, _den([_q(2), _q(2, -1), c, t], 2), prec, extra_num=_num([b2], 4))

    def extras(n):
        out = [_minus(4 * n + 2)]
        for k in range(n):
            out.append((ONE, c * _q(4 * k - 2 * n), 1))
            out.append((ONE, t * _q(4 * k - 2 * n), 1))
        return out
    fams = _ab_ratio(a, b, 2) + _den([c, t], 2)
    rhs = qsum(prec, fams, lambda n: Monomial((-1) ** n, 2 * n * n), extras)
    return pref, lhs, rhs


def _verma_a(p, prec):
    a, b = p["a"], p["b"]
    p1 = ParamAssignment(alpha=ONE, a=a, b=b)
    pref = lambda pr: _liu_prefactor(p1, 2, pr)
    lhs = _hyper_lhs(p1, 2, [], [_q(1, -1), _q(2, -1)], prec)
    rhs = qsum(prec, _ab_ratio(a, b, 2, shift=ONE),
               lambda n: Monomial((-1) ** n, Fraction(3 * n * n - 5 * n, 2)),
               lambda n: [_plus(n)], start=1, constant=ONE)
    return pref, lhs, rhs


def _root(m, k, what):
    try:
        return as_monomial(m).root(k)
    except ValueError:
        raise ValueError(f"{what} = {m} has no exact {k}-th root monomial") from None


def _verma_b(p, prec):
    alpha, beta, a, b = p["alpha"], p["beta"], p["a"], p["b"]
    r = _root(alpha, 2, "alpha")
    pref = lambda pr: _liu_prefactor(p, 4, pr)
    lhs = _hyper_lhs(p, 4, [beta, beta * _q(2)],
                     [-r * _q(2), -r * _q(4), beta * beta], prec)
    wpf, wpe = _wp(r, 2)
    fams = wpf + [scaled_family(-r * _q(2), beta, 2, _n)] + _ab(a, b, 4)
    fams += _den([-beta, _q(2)], 2) + _den([alpha * a, alpha * b], 4)
    rhs = qsum(prec, fams, lambda n: Monomial((-alpha.coeff) ** n, alpha.exp * n + 2 * n * n - 6 * n),
               wpe)
    return pref, lhs, rhs


def _andrews_wc(p, prec):
    alpha, b2, a, b = p["alpha"], p["beta2"], p["a"], p["b"]
    pref = lambda pr: _liu_prefactor(p, 1, pr)
    # (sqrt(alpha q), -sqrt(alpha q); q)_n = (alpha q; q^2)_n
    lhs_fams_num = [poch_family(b2, 2, _n)]
    lhs_fams_den = [poch_family(alpha * _q(1), 2, _n, -1), poch_family(b2, 1, _n, -1)]
    _need_small(alpha * a * b / _q(1), "alpha a b / q")
    z = alpha / _q(1)
    lhs = qsum(prec, _ab(a, b, 1) + lhs_fams_num + _den([_q(1)], 1) + lhs_fams_den,
               lambda n: z ** n)
    L = _lin(2)
    wpf, wpe = _wp(alpha, 1, L)
    fams = wpf + _ab(a, b, 1, L) + [poch_family(_q(1), 2, _n),
                                    scaled_family(alpha * _q(1), b2, 2, _n)]
    fams += _den([_q(1), alpha * a, alpha * b], 1, L)
    fams += _den([alpha * _q(1), b2 * _q(1)], 2)
    a2 = alpha * alpha
    rhs = qsum(prec, fams, lambda n: Monomial(a2.coeff ** n, a2.exp * n + 2 * n * n - 3 * n), wpe)
    return pref, lhs, rhs


def _andrews_strange(p, prec):
    alpha, a, b = p["alpha"], p["a"], p["b"]
    r = _root(alpha, 3, "alpha")
    third = Fraction(1, 3)
    pref = lambda pr: _liu_prefactor(p, 1, pr)
    _need_small(alpha * a * b / _q(1), "alpha a b / q")
    z = alpha / _q(1)
    fams = _ab(a, b, 1) + [poch_family(r * _q(third), third, _lin(3))]
    fams += _den([_q(1)], 1) + [poch_family(alpha * _q(1), 1, _lin(2), -1)]
    lhs = qsum(prec, fams, lambda n: z ** n)
    wpf, wpe = _wp(r, third)
    fams = wpf + _ab(a, b, 1) + _den([alpha * a, alpha * b], 1) + _den([_q(third)], third)
    r4 = r ** 4
    rhs = qsum(prec, fams, lambda n: Monomial((-1) ** n * r4.coeff ** n,
                                               r4.exp * n + Fraction(3 * n * n - 7 * n, 6)),
               wpe)
    return pref, lhs, rhs


def _root_unity(p, prec):
    a, b = p["a"], p["b"]
    p1 = ParamAssignment(alpha=ONE, a=a, b=b)
    pref = lambda pr: _liu_prefactor(p1, 1, pr)
    _need_small(a * b / _q(1), "ab / q")
    fams = _ab(a, b, 1) + [omega_family(ONE, 1, _n)]
    fams += _den([_q(1), Monomial(-1)], 1) + [poch_family(_q(1), 2, _n, -1)]
    z = _q(-1)
    lhs = qsum(prec, fams, lambda n: z ** n)

    def lead(m):
        n, r = divmod(m, 3)
        if r == 0:
            return Monomial((-1) ** n, Fraction(9 * n * n - 9 * n, 2))
        if r == 2:
            n += 1
            return Monomial(Fraction((-1) ** n, 2), 2 + Fraction(9 * n * n - 15 * n, 2))
        return Monomial(Fraction((-1) ** n, 2), -1 + Fraction(9 * n * n - 3 * n, 2))
    rhs = qsum(prec, _ab_ratio(a, b, 1, shift=ONE), lead, lambda m: [_plus(m)],
               start=1, constant=ONE)
    return pref, lhs, rhs


def _alpha_q3(p, prec):
    a, b = p["a"], p["b"]
    pref = lambda pr: _prefactor(pr, [_q(3), a * b * _q(2)], [a * _q(3), b * _q(3)], 1)
    _need_small(a * b * _q(2), "ab q^2")
    fams = _ab(a, b, 1) + [poch_family(_q(3), 3, _n)]
    fams += _den([_q(1)], 1) + [poch_family(_q(3), 1, _lin(2), -1)]
    lhs = qsum(prec, fams, lambda n: _q(2 * n))
    L = _lin(3)
    fams = _ab_ratio(a, b, 1, L, shift=_q(3))
    rhs = qsum(prec, fams, lambda n: Monomial((-1) ** n, Fraction(9 * n * n + 15 * n, 2)),
               lambda n: [_minus(6 * n + 3)])
    return pref, lhs, rhs


_BUILDERS = {
    TheoremId.LIU_5PHI4: _liu_5phi4,
    TheoremId.LIU_3PHI2: _liu_3phi2,
    TheoremId.CHU_REDUCED: _chu,
    TheoremId.HARSH_A: _harsh_a,
    TheoremId.HARSH_B: _harsh_b,
    TheoremId.PFAFF_REDUCED: _pfaff,
    TheoremId.WHIPPLE_A: _whipple_a,
    TheoremId.WHIPPLE_B: _whipple_b,
    TheoremId.WHIPPLE_C: _whipple_c,
    TheoremId.WHIPPLE_D: _whipple_d,
    TheoremId.WHIPPLE_E: _whipple_e,
    TheoremId.VERMA_A: _verma_a,
    TheoremId.VERMA_B: _verma_b,
    TheoremId.ANDREWS_WC: _andrews_wc,
    TheoremId.ANDREWS_STRANGE: _andrews_strange,
    TheoremId.ROOT_UNITY: _root_unity,
    TheoremId.ALPHA_Q3: _alpha_q3,
}


def _five_phi_four_sequence(p):
    """A_n = (q/b, beta, gamma, lam; q)_n / (q, c, d, e, h; q)_n (b/q)^n."""
    b = p["b"]
    num = [p["beta"], p["gamma"], p["lam"]]
    den = [_q(1), p["c"], p["d"], p["e"], p["h"]]

    def A(k, pr):
        pairs = [(b, _q(j + 1)) for j in range(k)]
        pairs += [(ONE, x * _q(j)) for x in num for j in range(k)]
        dens = [(ONE, x * _q(j)) for x in den for j in range(k)]
        return _ratio(pr, pairs, dens, _q(-k))
    return A


def theorem_parts(tid, p, prec, sequence=None):
    """(prefactor, left sum, right side); the left side is prefactor * sum."""
    tid = TheoremId(tid) if not isinstance(tid, TheoremId) else tid
    if not isinstance(p, ParamAssignment):
        p = ParamAssignment(p)
    check_params(tid, p)
    prec = Fraction(prec)
    if tid is TheoremId.LIU_MASTER:
        if sequence is None:
            raise MissingParameter("LIU_MASTER needs a coefficient sequence A")
        return _finish(liu_parts(sequence, p["alpha"], p["a"], p["b"], prec), prec)
    return _finish(_BUILDERS[tid](p, prec), prec)


def theorem_sides(tid, p, prec, sequence=None):
    """Both sides of the theorem, each truncated below q^prec."""
    pref, s, rhs = theorem_parts(tid, p, prec, sequence)
    return _times(pref, s, prec), rhs.truncate(prec)
