"""Recognize a unit series as prod_{k>=1} (1 - q^k)^(-a_k).

The exponents come from the logarithmic derivative: with q f'/f = sum b_n q^n
one has b_n = sum_{d|n} d a_d, which Moebius inversion undoes.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .powerseries import (
    InsufficientPrecision, NonUnit, from_coefficients, invert_unit, monomial,
)
from .qobjects import ONE, Monomial, format_monomial, poch_inf, poch_inf_inverse


class NotAUnit(NonUnit):
    pass


@dataclass(frozen=True)
class ExponentProfile:
    a: tuple
    kmax: int

    def __getitem__(self, k):
        """a_k for 1 <= k <= kmax."""
        if not 1 <= k <= self.kmax:
            raise IndexError(k)
        return self.a[k - 1]

    @property
    def integral(self):
        return all(x.denominator == 1 for x in self.a)

    def non_integral(self):
        """Indices k whose exponent is not an integer."""
        return [k for k, x in enumerate(self.a, 1) if x.denominator != 1]

    def __str__(self):
        return " ".join(f"{k}:{_fmt(x)}" for k, x in enumerate(self.a, 1) if x)


@dataclass(frozen=True)
class ProductPresentation:
    """lead * prod over the entries (r, e) of prod_{k = r mod M, k >= 1} (1 - q^k)^(-e)."""

    modulus: int
    entries: tuple
    lead: Monomial = ONE

    def exponent(self, k):
        r = k % self.modulus
        for res, e in self.entries:
            if res == r:
                return e
        return Fraction(0)

    def profile(self, kmax):
        return ExponentProfile(tuple(self.exponent(k) for k in range(1, kmax + 1)), kmax)

    def __str__(self):
        return format_presentation(self)


@dataclass(frozen=True)
class NoPeriodicity:
    profile: ExponentProfile
    max_modulus: int

    def __str__(self):
        return f"no period <= {self.max_modulus}; profile {self.profile}"


def _fmt(x):
    return str(x) if x.denominator == 1 else f"({x})"


def _qpow(k):
    return "q" if k == 1 else f"q^{k}"


def format_presentation(p):
    """Render as (q^r1,...;q^M)_oo^e quotients, grouped by exponent."""
    M = p.modulus
    groups = {}
    for r, e in sorted(p.entries):
        if e:
            groups.setdefault(e, []).append(r)
    num, den = [], []
    for e, rs in sorted(groups.items(), key=lambda kv: (abs(kv[0]), kv[0])):
        atoms = ",".join(_qpow(r or M) for r in sorted(rs, key=lambda r: r or M))
        body = f"({atoms};{_qpow(M)})_oo"
        k = abs(e)
        if k != 1:
            body += f"^{_fmt(k)}"
        (den if e > 0 else num).append(body)
    out = " ".join(num) if num else "1"
    if den:
        out += " / " + " ".join(den)
    if p.lead != ONE:
        out = f"{format_monomial(p.lead)} * {out}"
    return out


@lru_cache(maxsize=None)
def _mobius(n):
    result, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    if m > 1:
        result = -result
    return result


def _divisors(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _unit_coeffs(f, kmax):
    g = f.rescale_down()
    if g.scale != 1:
        raise ValueError("series has fractional exponents")
    if g.is_zero() or g.min_exp != 0 or g.coeff(0) != 1:
        raise NotAUnit("series must have constant term 1")
    if g.prec <= kmax:
        raise InsufficientPrecision(f"need precision above {kmax}, have {g.prec}")
    return g.integer_coeffs(kmax + 1)


def factor_exponents(f, kmax):
    """Exponent profile a_1..a_kmax with f = prod (1 - q^k)^(-a_k) + O(q^(kmax+1))."""
    c = _unit_coeffs(f, kmax)
    b = [Fraction(0)] * (kmax + 1)
    for n in range(1, kmax + 1):
        acc = n * c[n]
        for j in range(1, n):
            if b[j] and c[n - j]:
                acc -= b[j] * c[n - j]
        b[n] = acc
    a = []
    for n in range(1, kmax + 1):
        s = sum(_mobius(n // d) * b[d] for d in _divisors(n))
        a.append(Fraction(s, n))
    return ExponentProfile(tuple(a), kmax)


def detect_modulus(profile, max_modulus):
    """Smallest period M <= max_modulus of k -> a_k, or NoPeriodicity."""
    if profile.kmax < 3 * max_modulus:
        raise ValueError(f"kmax {profile.kmax} is below 3 * max_modulus = {3 * max_modulus}")
    a = profile.a
    for M in range(1, max_modulus + 1):
        if all(a[k] == a[k - M] for k in range(M, len(a))):
            entries = tuple((r % M, a[r - 1]) for r in range(1, M + 1) if a[r - 1])
            return ProductPresentation(M, tuple(sorted(entries)))
    return NoPeriodicity(profile, max_modulus)


def reconstruct(p, prec):
    """Expand a presentation or profile back to a series known below q^prec."""
    prec = int(prec)
    if isinstance(p, ExponentProfile):
        kmax = min(p.kmax, prec - 1)
        exps = {k: p[k] for k in range(1, kmax + 1) if p[k]}
        lead = ONE
        if p.kmax < prec - 1:
            prec = p.kmax + 1
    else:
        exps = {k: p.exponent(k) for k in range(1, prec) if p.exponent(k)}
        lead = p.lead
    c = [Fraction(0)] * prec
    c[0] = Fraction(1)
    for k, e in exps.items():
        c = _times_binomial_power(c, k, -e)
    out = from_coefficients(c, prec)
    if lead != ONE:
        out = out.shift(lead.coeff, lead.exp)
    return out


def _times_binomial_power(c, k, e):
    """Multiply the truncated coefficient list by (1 - q^k)^e, e rational."""
    n = len(c)
    if e.denominator == 1 and e > 0:
        for _ in range(int(e)):
            for i in range(n - 1, k - 1, -1):
                c[i] -= c[i - k]
        return c
    if e.denominator == 1:
        for _ in range(int(-e)):
            for i in range(k, n):
                c[i] += c[i - k]
        return c
    # general binomial series sum_j binom(e, j) (-q^k)^j
    terms = [Fraction(1)]
    j = 1
    while j * k < n:
        terms.append(terms[-1] * (e - j + 1) / j * -1)
        j += 1
    out = [Fraction(0)] * n
    for i, x in enumerate(c):
        if x:
            for j, t in enumerate(terms):
                if i + j * k >= n:
                    break
                out[i + j * k] += x * t
    return out


def peel(f):
    """Split f = lead * unit with unit having constant term 1."""
    if f.is_zero():
        raise NotAUnit("the zero series has no leading term")
    e = f.valuation
    c = f.coeff(e)
    return Monomial(c, e), f.shift(1 / c, -e)


def recognize(f, kmax, max_modulus):
    """Single-product recognition after peeling the leading monomial."""
    lead, unit = peel(f)
    prof = factor_exponents(unit, kmax)
    res = detect_modulus(prof, max_modulus)
    if isinstance(res, ProductPresentation):
        res = ProductPresentation(res.modulus, res.entries, lead)
    return res


# --- two-term theta splits --------------------------------------------------

@dataclass(frozen=True)
class Theta:
    """(s q^r, s q^(M-r), q^M; q^M)_oo with s = +1 or -1."""

    modulus: int
    r: int
    sign: int

    def series(self, prec):
        M = self.modulus
        out = poch_inf(Monomial(self.sign, self.r), M, prec)
        out = out * poch_inf(Monomial(self.sign, M - self.r), M, prec)
        return (out * poch_inf(Monomial(1, M), M, prec)).truncate(prec)

    def __str__(self):
        sg = "" if self.sign > 0 else "-"
        M = self.modulus
        return f"({sg}{_qpow(self.r)},{sg}{_qpow(M - self.r)},{_qpow(M)};{_qpow(M)})_oo"


@dataclass(frozen=True)
class TwoTermPresentation:
    """lead * factor * (first + coeff * second); factor holds ((base, step), power)."""

    factor: tuple
    first: Theta
    coeff: Monomial
    second: Theta
    lead: Monomial = ONE

    def series(self, prec):
        out = monomial(1, 0, prec)
        for atom, e in self.factor:
            out = out * _atom_series(atom, e, prec)
        t = self.first.series(prec) + self.second.series(prec).shift(self.coeff.coeff, self.coeff.exp)
        out = (out * t).truncate(prec)
        return out.shift(self.lead.coeff, self.lead.exp).truncate(prec)

    def __str__(self):
        f = _fmt_atoms(self.factor)
        if self.lead != ONE:
            f = f"{format_monomial(self.lead)} * {f}"
        c = self.coeff
        if c.coeff < 0:
            op, c = "-", -c
        else:
            op = "+"
        cs = "" if c == ONE else format_monomial(c)
        return f"{f} * ({self.first} {op} {cs}{self.second})"


_NORMALIZER_ATOMS = tuple(
    [(Monomial(1, i), i) for i in (1, 2, 3)]
    + [(Monomial(-1, i), i) for i in (1, 2, 3)]
    + [(Monomial(1, 1), 2), (Monomial(-1, 1), 2)])


def _fmt_atoms(atoms):
    num = [f"({format_monomial(b)};{_qpow(s)})_oo" for (b, s), e in atoms if e > 0]
    den = [f"({format_monomial(b)};{_qpow(s)})_oo" for (b, s), e in atoms if e < 0]
    out = " ".join(num) if num else "1"
    if den:
        out += " / " + " ".join(den)
    return out


def _atom_series(atom, e, prec):
    (b, s) = atom
    return poch_inf(b, s, prec) if e > 0 else poch_inf_inverse(b, s, prec)


def _candidate_factors():
    singles = [((a, e),) for a in _NORMALIZER_ATOMS for e in (1, -1)]
    out = [()] + singles
    atoms = _NORMALIZER_ATOMS
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            for e1 in (1, -1):
                for e2 in (1, -1):
                    out.append(((atoms[i], e1), (atoms[j], e2)))
    return out


def split_two_term(f, kmax, max_modulus):
    """Try f = lead * P * (T1 + c q^e T2) with P a small product and T1, T2 thetas.

    Returns a TwoTermPresentation or None when no candidate fits to q^kmax.
    """
    lead, unit = peel(f)
    prec = kmax + 1
    unit = unit.truncate(prec)
    thetas = {}

    def theta(t):
        if t not in thetas:
            thetas[t] = t.series(prec)
        return thetas[t]

    for atoms in _candidate_factors():
        P = monomial(1, 0, prec)
        for atom, e in atoms:
            P = P * _atom_series(atom, e, prec)
        h0 = (unit * invert_unit(P)).truncate(prec)
        # both thetas start with 1, so an equal-degree split doubles the constant
        for scale in (1, 2):
            h = h0 * scale if scale != 1 else h0
            for M in range(2, max_modulus + 1):
                for r in range(1, M // 2 + 1):
                    for s in (1, -1):
                        first = Theta(M, r, s)
                        d = (h - theta(first)).truncate(prec)
                        if d.is_zero():
                            continue
                        c0, t2 = peel(d)
                        if c0.exp.denominator != 1 or (scale == 2) != (c0.exp == 0):
                            continue
                        room = prec - c0.exp
                        t2 = t2.truncate(room)
                        second = _theta_from_head(t2, M)
                        if second is None or (second == first and c0.exp == 0):
                            continue
                        if t2 == theta(second).truncate(room):
                            lead2 = lead if scale == 1 else lead * Monomial(Fraction(1, 2))
                            return TwoTermPresentation(atoms, first, c0, second, lead2)
    return None


def _key(t):
    return (t.modulus, t.r, t.sign)


def _theta_from_head(u, M):
    """The theta of modulus M whose first terms match the unit u, if any."""
    terms = [(e, c) for e, c in u.terms() if e > 0]
    if not terms:
        return None
    k, x = terms[0]
    if k.denominator != 1 or not 1 <= k <= M // 2:
        return None
    k = int(k)
    want = 2 if 2 * k == M else 1
    if abs(x) != want:
        return None
    return Theta(M, k, 1 if x < 0 else -1)


