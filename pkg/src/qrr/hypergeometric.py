"""Basic hypergeometric series and closed forms of classical summations.

All functions work in the base Q = q^qstep.  Parameters that only occur in
conjugate pairs are passed through their rational symmetric functions:
(b, -b) through b^2 and (w x, w^2 x) through x, where w^3 = 1.
"""

from dataclasses import dataclass
from fractions import Fraction

from .powerseries import monomial
from .qobjects import (
    ONE, ZERO, Monomial, Product, as_monomial, omega_family, poch_family, qsum,
)


class UnsupportedSpecialization(ValueError):
    pass


@dataclass(frozen=True)
class PhiSpec:
    upper: tuple
    lower: tuple
    qstep: Fraction = Fraction(1)
    z: Monomial = ONE
    # (b, -b) pairs given by b^2, and (w x, w^2 x) pairs given by x
    upper_pm: tuple = ()
    lower_pm: tuple = ()
    upper_omega: tuple = ()
    lower_omega: tuple = ()

    def __post_init__(self):
        for name in ("upper", "lower", "upper_pm", "lower_pm", "upper_omega", "lower_omega"):
            object.__setattr__(self, name, tuple(as_monomial(x) for x in getattr(self, name)))
        object.__setattr__(self, "qstep", Fraction(self.qstep))
        object.__setattr__(self, "z", as_monomial(self.z))

    @property
    def r(self):
        return len(self.upper) + 2 * len(self.upper_pm) + 2 * len(self.upper_omega)

    @property
    def s(self):
        return len(self.lower) + 2 * len(self.lower_pm) + 2 * len(self.lower_omega)

    def families(self):
        Q = self.qstep
        n_ = _identity
        fams = [poch_family(a, Q, n_) for a in self.upper]
        fams += [poch_family(b2, 2 * Q, n_) for b2 in self.upper_pm]
        fams += [omega_family(x, Q, n_) for x in self.upper_omega]
        fams.append(poch_family(Monomial(1, Q), Q, n_, -1))
        fams += [poch_family(b, Q, n_, -1) for b in self.lower]
        fams += [poch_family(b2, 2 * Q, n_, -1) for b2 in self.lower_pm]
        fams += [omega_family(x, Q, n_, -1) for x in self.lower_omega]
        return fams


def _identity(n):
    return n


def terminating_length(spec):
    """Smallest N with an upper parameter equal to Q^(-N), or None."""
    best = None
    for a in spec.upper:
        if a.coeff == 1 and a.exp <= 0:
            N = -a.exp / spec.qstep
            if N.denominator == 1 and (best is None or N < best):
                best = int(N)
    return best


def phi(spec, prec):
    """r-phi-s with the ((-1)^n Q^(n(n-1)/2))^(1+s-r) normalisation."""
    Q = spec.qstep
    power = 1 + spec.s - spec.r
    z = spec.z

    def lead(n):
        m = z ** n
        if power:
            m = m * Monomial((-1) ** (n * power), Q * n * (n - 1) * power / 2)
        return m

    return qsum(prec, spec.families(), lead)


# --- closed forms ----------------------------------------------------------

def _ratio(prec, num, den, lead=ONE):
    """lead * prod(x - y for num) / prod(x - y for den) as a series."""
    p = Product(_headroom(prec, num, den, lead))
    p.times_monomial(lead)
    for x, y in num:
        p.times(x, y)
        if p.zero:
            return monomial(0, 0, prec)
    for x, y in den:
        p.times(x, y, -1)
    return p.series(prec)


def _headroom(prec, num, den, lead):
    from .qobjects import lead_of_difference
    e = lead.exp
    for x, y in num:
        m = lead_of_difference(x, y)
        if m.is_zero():
            return Fraction(prec)
        e += m.exp
    for x, y in den:
        e -= lead_of_difference(x, y).exp
    return Fraction(prec) - e


def _poch(a, step, n):
    """Linear factors of (a; q^step)_n."""
    a = as_monomial(a)
    return [(ONE, _shift(a, k * step)) for k in range(n)]


def _scaled(c, a, step, n):
    """Linear factors of prod_{k<n} (a - c q^(k step))."""
    return [(as_monomial(a), _shift(as_monomial(c), k * step)) for k in range(n)]


def _shift(m, e):
    return m if m.is_zero() else Monomial(m.coeff, m.exp + e)


def chu_vandermonde_rhs(a, c, qstep, n, prec):
    """2phi1(Q^-n, a; c; Q, Q) = (c/a; Q)_n a^n / (c; Q)_n."""
    a, c, Q = as_monomial(a), as_monomial(c), Fraction(qstep)
    return _ratio(prec, _scaled(c, a, Q, n), _poch(c, Q, n))


def pfaff_rhs(alpha, b, c, qstep, n, prec):
    """3phi2(Q^-n, alpha Q^n, alpha b c/Q; alpha b, alpha c; Q, Q)."""
    alpha, b, c, Q = as_monomial(alpha), as_monomial(b), as_monomial(c), Fraction(qstep)
    q_ = Monomial(1, Q)
    num = _scaled(q_, b, Q, n) + _scaled(q_, c, Q, n)
    den = _poch(alpha * b, Q, n) + _poch(alpha * c, Q, n)
    return _ratio(prec, num, den, (alpha / q_) ** n if not alpha.is_zero() else
                  (ZERO if n else ONE))


def whipple_rhs(c, e, qstep, n, prec, c_sq=None):
    """4phi3(Q^-n, Q^(n+1), c, -c; e, c^2 Q/e, -Q; Q, Q) in closed form.

    Only c^2 enters, so a purely imaginary c is passed through ``c_sq``.
    """
    Q = Fraction(qstep)
    e = as_monomial(e)
    csq = as_monomial(c_sq) if c_sq is not None else as_monomial(c) ** 2
    if e.is_zero():
        raise UnsupportedSpecialization("e = 0 is not a valid lower parameter")
    w = csq * Monomial(1, Q) / e
    num = _poch(e * Monomial(1, -n * Q), 2 * Q, n) + _poch(w * Monomial(1, -n * Q), 2 * Q, n)
    den = _poch(e, Q, n) + _poch(w, Q, n)
    return _ratio(prec, num, den, Monomial(1, Q * n * (n + 1) / 2))


def whipple_special(kind, qstep, n, prec):
    """The explicit c = 0 evaluations with Q = q^qstep and p = Q^(1/2).

    kind names the value of e: "e=-p", "e=-p^3", "e=p^3" or "e=p".
    """
    Q = Fraction(qstep)
    p = Q / 2  # exponent of p
    if kind == "e=-p":
        return monomial(1, p * (n * n + n) / 2, prec)
    if kind == "e=-p^3":
        num = [(ONE, Monomial(-1, p))]
        den = [(ONE, Monomial(-1, p * (2 * n + 1)))]
        return _ratio(prec, num, den, Monomial(1, p * (n * n + 3 * n) / 2))
    m, odd = divmod(n, 2)
    sign = (-1) ** m
    if kind == "e=p^3":
        if odd:
            lead, k = Monomial(sign, p * (2 * m * m + 5 * m + 2)), 4 * m + 3
        else:
            lead, k = Monomial(sign, p * (2 * m * m + 3 * m)), 4 * m + 1
        return _ratio(prec, [(ONE, Monomial(1, p))], [(ONE, Monomial(1, p * k))], lead)
    if kind == "e=p":
        if odd:
            return monomial(-sign, p * (2 * m * m + 3 * m + 1), prec)
        return monomial(sign, p * (2 * m * m + m), prec)
    raise UnsupportedSpecialization(f"unknown specialization {kind!r}")


WHIPPLE_SPECIAL_E = {"e=-p": (-1, 1), "e=-p^3": (-1, 3), "e=p^3": (1, 3), "e=p": (1, 1)}


def verma_jain_rhs(a, c, qstep, n, prec):
    """4phi3(Q^-2n, a^2 Q^2n, -c, -cQ; -aQ, -aQ^2, c^2; Q^2, Q^2) in closed form."""
    a, c, Q = as_monomial(a), as_monomial(c), Fraction(qstep)
    q_ = Monomial(1, Q)
    num = _poch(-q_, Q, n) + [(ONE, -a)]
    # (Qa/c; Q)_n (-c)^n = prod (a Q^(k+1) - c)
    num += [(_shift(a, (k + 1) * Q), c) for k in range(n)]
    den = _poch(-a, Q, n) + _poch(c, Q, n) + [(ONE, -_shift(a, 2 * n * Q))]
    return _ratio(prec, num, den)


def andrews_4phi3_rhs(a, c, qstep, n, prec, a_sq=None, c_sq=None):
    """4phi3(Q^-n, a^2 Q^(n+1), c, -c; aQ, -aQ, c^2; Q, Q) in closed form."""
    Q = Fraction(qstep)
    asq = as_monomial(a_sq) if a_sq is not None else as_monomial(a) ** 2
    csq = as_monomial(c_sq) if c_sq is not None else as_monomial(c) ** 2
    if n % 2:
        return monomial(0, 0, prec)
    m = n // 2
    q2 = Monomial(1, 2 * Q)
    num = _poch(Monomial(1, Q), 2 * Q, m)
    # (a^2 Q^2/c^2; Q^2)_m c^(2m) = prod (c^2 - a^2 Q^2 Q^(2k))
    num += _scaled(asq * q2, csq, 2 * Q, m)
    den = _poch(asq * q2, 2 * Q, m) + _poch(csq * Monomial(1, Q), 2 * Q, m)
    return _ratio(prec, num, den)


def andrews_strange_rhs(alpha, qstep, n, prec):
    """Closed form of the 5phi4 with upper Q^-n, alpha Q^n, alpha^(1/3) Q^(j/3) (j=1,2,3)
    and lower +-alpha^(1/2) Q, +-alpha^(1/2) Q^(1/2)."""
    alpha, Q = as_monomial(alpha), Fraction(qstep)
    try:
        t = alpha.root(3)
    except ValueError as exc:
        raise UnsupportedSpecialization(str(exc)) from None
    if n == 0:
        return monomial(1, 0, prec)
    q3 = Q / 3
    # (1-alpha)/(alpha;Q)_n = 1/(alpha Q;Q)_(n-1), (t;Q^(1/3))_n/(1-t) = (t Q^(1/3);Q^(1/3))_(n-1)
    num = [(ONE, _shift(t, 2 * n * q3))]
    num += _poch(_shift(t, q3), q3, n - 1)
    num += _poch(Monomial(1, Q), Q, n)
    den = _poch(_shift(alpha, Q), Q, n - 1)
    den += [(ONE, _shift(alpha, 2 * n * Q))]
    den += _poch(Monomial(1, q3), q3, n)
    lead = t ** n * Monomial(1, n * q3)
    return _ratio(prec, num, den, lead)


def andrews_rootunity_rhs(alpha, qstep, n, prec):
    """Closed form of the 5phi4 with upper Q^-n, alpha Q^n, t, w t, w^2 t (t^3 = alpha)
    and lower +-alpha^(1/2), +-(alpha Q)^(1/2)."""
    alpha, Q = as_monomial(alpha), Fraction(qstep)
    try:
        alpha.root(3)
    except ValueError as exc:
        raise UnsupportedSpecialization(str(exc)) from None
    if n % 3:
        return monomial(0, 0, prec)
    m = n // 3
    if alpha == ONE:
        # (1;Q^3)_m / (1;Q)_n tends to (Q^3;Q^3)_(m-1) / (Q;Q)_(n-1)
        if m == 0:
            return monomial(1, 0, prec)
        num = _poch(Monomial(1, Q), Q, n) + _poch(Monomial(1, 3 * Q), 3 * Q, m - 1)
        den = _poch(Monomial(1, Q), Q, n - 1) + _poch(Monomial(1, 3 * Q), 3 * Q, m)
        return _ratio(prec, num, den)
    num = _poch(Monomial(1, Q), Q, n) + _poch(alpha, 3 * Q, m)
    den = _poch(alpha, Q, n) + _poch(Monomial(1, 3 * Q), 3 * Q, m)
    return _ratio(prec, num, den, alpha ** m)


def rootunity_alpha_one(n, prec):
    """The 4phi3(Q^-n, Q^n, w, w^2; -1, Q^(1/2), -Q^(1/2); Q, Q) values."""
    return monomial(1 if n % 3 == 0 else Fraction(-1, 2), 0, prec)


def rootunity_alpha_q3(qstep, n, prec):
    """The alpha = Q^3 value of the root-of-unity 5phi4, nonzero for 3 | n."""
    Q = Fraction(qstep)
    if n % 3:
        return monomial(0, 0, prec)
    num = [(ONE, Monomial(1, Q)), (ONE, Monomial(1, 2 * Q))]
    den = [(ONE, Monomial(1, (n + 1) * Q)), (ONE, Monomial(1, (n + 2) * Q))]
    return _ratio(prec, num, den, Monomial(1, n * Q))


# --- the series the closed forms evaluate -----------------------------------

def _qe(e, c=1):
    return Monomial(c, e)


def chu_vandermonde_spec(a, c, qstep, n):
    Q = Fraction(qstep)
    return PhiSpec((_qe(-n * Q), as_monomial(a)), (as_monomial(c),), Q, _qe(Q))


def pfaff_spec(alpha, b, c, qstep, n):
    Q = Fraction(qstep)
    alpha, b, c = as_monomial(alpha), as_monomial(b), as_monomial(c)
    upper = (_qe(-n * Q), _shift(alpha, n * Q), alpha * b * c / _qe(Q))
    return PhiSpec(upper, (alpha * b, alpha * c), Q, _qe(Q))


def whipple_spec(c, e, qstep, n, c_sq=None):
    Q = Fraction(qstep)
    e = as_monomial(e)
    csq = as_monomial(c_sq) if c_sq is not None else as_monomial(c) ** 2
    return PhiSpec((_qe(-n * Q), _qe((n + 1) * Q)), (e, csq * _qe(Q) / e, _qe(Q, -1)),
                   Q, _qe(Q), upper_pm=(csq,))


def verma_jain_spec(a, c, qstep, n):
    Q = Fraction(qstep)
    a, c = as_monomial(a), as_monomial(c)
    upper = (_qe(-2 * n * Q), _shift(a ** 2, 2 * n * Q), -c, -_shift(c, Q))
    lower = (-_shift(a, Q), -_shift(a, 2 * Q), c ** 2)
    return PhiSpec(upper, lower, 2 * Q, _qe(2 * Q))


def andrews_4phi3_spec(a, c, qstep, n, a_sq=None, c_sq=None):
    Q = Fraction(qstep)
    asq = as_monomial(a_sq) if a_sq is not None else as_monomial(a) ** 2
    csq = as_monomial(c_sq) if c_sq is not None else as_monomial(c) ** 2
    return PhiSpec((_qe(-n * Q), _shift(asq, (n + 1) * Q)), (csq,), Q, _qe(Q),
                   upper_pm=(csq,), lower_pm=(_shift(asq, 2 * Q),))


def andrews_strange_spec(alpha, qstep, n):
    Q = Fraction(qstep)
    alpha = as_monomial(alpha)
    t = alpha.root(3)
    upper = (_qe(-n * Q), _shift(alpha, n * Q), _shift(t, Q / 3), _shift(t, 2 * Q / 3), _shift(t, Q))
    return PhiSpec(upper, (), Q, _qe(Q), lower_pm=(_shift(alpha, 2 * Q), _shift(alpha, Q)))


def andrews_rootunity_spec(alpha, qstep, n):
    Q = Fraction(qstep)
    alpha = as_monomial(alpha)
    t = alpha.root(3)
    return PhiSpec((_qe(-n * Q), _shift(alpha, n * Q), t), (), Q, _qe(Q),
                   upper_omega=(t,), lower_pm=(alpha, _shift(alpha, Q)))


def rootunity_alpha_one_spec(qstep, n):
    Q = Fraction(qstep)
    return PhiSpec((_qe(-n * Q), _qe(n * Q)), (Monomial(-1),), Q, _qe(Q),
                   upper_omega=(ONE,), lower_pm=(_qe(Q),))
