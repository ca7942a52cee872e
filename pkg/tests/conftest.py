import zlib
from fractions import Fraction

from hypothesis import strategies as st

from qrr.powerseries import from_coefficients
from qrr.qobjects import Monomial

small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def series(draw, scale=None, max_len=8, unit=False):
    """Small random series, possibly at scale 2, possibly a unit."""
    s = draw(st.sampled_from([1, 2])) if scale is None else scale
    coeffs = draw(st.lists(small_fractions, min_size=1, max_size=max_len))
    if unit:
        lead = draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 3)]))
        coeffs[0] = lead
        min_exp = 0
    else:
        min_exp = draw(st.integers(0, 3))
    prec = min_exp + len(coeffs) + draw(st.integers(0, 4))
    return from_coefficients(coeffs, prec, s, min_exp)


def monomials(exps=(Fraction(1, 2), 1, Fraction(3, 2), 2, 3), coeffs=(1, -1)):
    return st.builds(Monomial, st.sampled_from(coeffs), st.sampled_from([Fraction(e) for e in exps]))


def seed_for(*parts):
    """Stable seed independent of hash randomization."""
    return zlib.crc32("/".join(str(p) for p in parts).encode())


def partitions_count(n, allowed):
    """Number of partitions of n into parts drawn from the allowed predicate."""
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        if allowed(part):
            for m in range(part, n + 1):
                ways[m] += ways[m - part]
    return ways[n]


def rr_partitions(n, gap=2, smallest=1):
    """Partitions of n whose parts differ by at least gap and are >= smallest."""
    def count(rest, low):
        if rest == 0:
            return 1
        return sum(count(rest - p, p + gap) for p in range(low, rest + 1))
    return count(n, smallest)
