"""Catalog of sum = product identities: data types, parser and evaluators.

Record grammar (blank lines separate records, '#' starts a comment):

    id: S.58
    alias: S.23                      optional, comma separated
    theorem: PFAFF_REDUCED           optional source theorem
    preset: alpha=1 c=q^1/2 d=-q^1/2 a=0 b=0
    link: subst=1 norm=[2; num=[]; den=[]] shift=-1
    sum: sign=+ qexp=(1,0,0)/1 num=[poch(q^2;q^2;n-1)] den=[poch(q;q;n)]
    prod: term=[1; num=[poch(-q^5;q^12)]; den=[poch(q;q)]] term=[...]
    order: 200

Sum factors are poch(x;Q;L) = (x;Q)_L, pm(x;Q;L) = (y,-y;Q)_L with y^2 = x,
omega(x;Q;L) = (wx,w^2x;Q)_L with w^3 = 1, and bin(c;L) = 1 - c q^L.  Lengths
L are k*n + m.  The optional sum keys start=N and const=c give
const + sum_{n >= N}.  The link states theorem_sum(q) = norm * sum(q^subst) + shift,
so the theorem's right side equals prefactor * (norm * product(q^subst) + shift).

A record holding only theorem: and preset: lines is a standalone theorem
preset with no identity attached; parse_catalog skips it and catalog_presets
returns it alongside the presets of the identity records.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .powerseries import monomial, substitute_q_power
from .qobjects import (
    ONE, Monomial, as_monomial, format_monomial, omega_family, parse_monomial,
    poch_family, poch_inf, poch_inf_inverse, qsum,
)
from .transforms import ParamAssignment, TheoremId, check_params, theorem_parts


class CatalogSyntaxError(SyntaxError):
    def __init__(self, msg, line, column, text=""):
        super().__init__(f"line {line}, column {column}: {msg}", ("<catalog>", line, column, text))
        self.line = line
        self.column = column


class DuplicateLabel(ValueError):
    pass


@dataclass(frozen=True)
class LinExpr:
    slope: int
    offset: int

    def __call__(self, n):
        return self.slope * n + self.offset

    def __str__(self):
        if self.slope == 0:
            return str(self.offset)
        head = "n" if self.slope == 1 else f"{self.slope}n"
        if self.offset:
            head += f"{self.offset:+d}"
        return head


@dataclass(frozen=True)
class PochFactor:
    kind: str
    base: Monomial
    qstep: Fraction
    length: LinExpr

    def __str__(self):
        b = format_monomial(self.base)
        if self.kind == "bin":
            return f"bin({b};{self.length})"
        return f"{self.kind}({b};{_qpow(self.qstep)};{self.length})"


@dataclass(frozen=True)
class SumSide:
    sign: int
    qexp: tuple
    num: tuple
    den: tuple
    start: int = 0
    const: Monomial = None

    def exponent(self, n):
        A, B, C, D = self.qexp
        return Fraction(A * n * n + B * n + C, D)


@dataclass(frozen=True)
class ProductTerm:
    coeff: Monomial
    num: tuple
    den: tuple

    def series(self, prec):
        out = self.coeff.series(prec)
        for x, s in self.num:
            if out.is_zero():
                return out
            out = out * poch_inf(x, s, prec)
        for x, s in self.den:
            out = out * poch_inf_inverse(x, s, prec)
        return out.truncate(prec)

    def __str__(self):
        atoms = lambda xs: ", ".join(f"poch({format_monomial(x)};{_qpow(s)})" for x, s in xs)
        return f"[{format_monomial(self.coeff)}; num=[{atoms(self.num)}]; den=[{atoms(self.den)}]]"


@dataclass(frozen=True)
class ProductSide:
    terms: tuple


@dataclass(frozen=True)
class Link:
    subst: Fraction = Fraction(1)
    norm: ProductTerm = None
    shift: Fraction = Fraction(0)


@dataclass(frozen=True)
class IdentityEntry:
    label: str
    sum: SumSide
    product: ProductSide
    source_theorem: TheoremId = None
    preset: ParamAssignment = None
    default_order: int = 200
    aliases: tuple = ()
    link: Link = field(default_factory=Link)
    line: int = 0

    @property
    def labels(self):
        return (self.label,) + self.aliases


def _qpow(s):
    s = Fraction(s)
    return "q" if s == 1 else f"q^{s}"


# --- parsing ---------------------------------------------------------------

_KEYS = ("id", "alias", "theorem", "preset", "link", "sum", "prod", "order")
_LABEL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*(\.[A-Za-z0-9]+)+$")
_LIN_RE = re.compile(r"^(?:(\d*)n)?([+-]?\d+)?$")


class _Cursor:
    """Character cursor over one field value, reporting catalog positions."""

    def __init__(self, text, line, col0):
        self.text = text
        self.i = 0
        self.line = line
        self.col0 = col0

    def error(self, msg, at=None):
        at = self.i if at is None else at
        raise CatalogSyntaxError(msg, self.line, self.col0 + at + 1, self.text)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i] == " ":
            self.i += 1

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, s):
        self.skip()
        if not self.text.startswith(s, self.i):
            self.error(f"expected {s!r}")
        self.i += len(s)

    def word(self):
        self.skip()
        m = re.compile(r"[A-Za-z_][A-Za-z0-9_]*").match(self.text, self.i)
        if not m:
            self.error("expected a name")
        self.i = m.end()
        return m.group(0), m.start()

    def until(self, stops):
        self.skip()
        j = self.i
        depth = 0
        while j < len(self.text):
            ch = self.text[j]
            if ch == "(":
                depth += 1
            elif ch == ")" and depth:
                depth -= 1
            elif ch in stops and depth == 0:
                break
            j += 1
        raw, start = self.text[self.i:j].strip(), self.i
        self.i = j
        return raw, start

    def done(self):
        self.skip()
        return self.i >= len(self.text)


def _monomial_at(cur, raw, start):
    try:
        return parse_monomial(raw)
    except ValueError:
        cur.error(f"bad monomial {raw!r}", start)


def _lin_at(cur, raw, start):
    m = _LIN_RE.match(raw.replace(" ", ""))
    if not raw or not m or (m.group(1) is None and m.group(2) is None):
        cur.error(f"bad length {raw!r}", start)
    if m.group(1) is None:
        return LinExpr(0, int(m.group(2)))
    slope = int(m.group(1)) if m.group(1) else 1
    return LinExpr(slope, int(m.group(2) or 0))


def _qstep_at(cur, raw, start):
    m = _monomial_at(cur, raw, start)
    if m.coeff != 1 or m.exp <= 0:
        cur.error(f"base step must be q^s with s > 0, got {raw!r}", start)
    return m.exp


_SUM_KINDS = ("poch", "pm", "omega", "bin")


def _factor(cur, kinds):
    name, at = cur.word()
    if name not in kinds:
        cur.error(f"unknown factor kind {name!r}", at)
    cur.expect("(")
    args = []
    while True:
        raw, start = cur.until(";)")
        args.append((raw, start))
        if cur.peek() == ";":
            cur.i += 1
            continue
        cur.expect(")")
        break
    return name, args, at


def _sum_factor(cur):
    name, args, at = _factor(cur, _SUM_KINDS)
    want = 2 if name == "bin" else 3
    if len(args) != want:
        cur.error(f"{name} takes {want} arguments", at)
    base = _monomial_at(cur, *args[0])
    if name == "bin":
        return PochFactor("bin", base, Fraction(1), _lin_at(cur, *args[1]))
    return PochFactor(name, base, _qstep_at(cur, *args[1]), _lin_at(cur, *args[2]))


def _inf_factor(cur):
    name, args, at = _factor(cur, ("poch",))
    if len(args) != 2:
        cur.error("an infinite poch takes 2 arguments", at)
    return _monomial_at(cur, *args[0]), _qstep_at(cur, *args[1])


def _list(cur, item):
    cur.expect("[")
    out = []
    if cur.peek() == "]":
        cur.i += 1
        return tuple(out)
    while True:
        out.append(item(cur))
        if cur.peek() == ",":
            cur.i += 1
            continue
        cur.expect("]")
        return tuple(out)


def _term(cur):
    cur.expect("[")
    raw, start = cur.until(";]")
    coeff = _monomial_at(cur, raw, start)
    num = den = ()
    while cur.peek() == ";":
        cur.i += 1
        key, at = cur.word()
        cur.expect("=")
        if key == "num":
            num = _list(cur, _inf_factor)
        elif key == "den":
            den = _list(cur, _inf_factor)
        else:
            cur.error(f"unknown product key {key!r}", at)
    cur.expect("]")
    return ProductTerm(coeff, num, den)


def _parse_sum(cur):
    sign, qexp, num, den, start, const = 1, (0, 0, 0, 1), (), (), 0, None
    seen = set()
    while not cur.done():
        key, at = cur.word()
        if key in seen:
            cur.error(f"repeated sum key {key!r}", at)
        seen.add(key)
        cur.expect("=")
        if key == "sign":
            raw, s = cur.until(" ")
            if raw not in ("+", "-"):
                cur.error("sign must be + or -", s)
            sign = 1 if raw == "+" else -1
        elif key == "qexp":
            raw, s = cur.until(" ")
            m = re.match(r"^\((-?\d+),(-?\d+),(-?\d+)\)/([12])$", raw.replace(" ", ""))
            if not m:
                cur.error(f"bad qexp {raw!r}", s)
            qexp = tuple(int(x) for x in m.groups())
            A, B, C, D = qexp
            if any((A * n * n + B * n + C) % D for n in range(4)):
                cur.error(f"qexp {raw} is not integral", s)
        elif key == "num":
            num = _list(cur, _sum_factor)
        elif key == "den":
            den = _list(cur, _sum_factor)
        elif key == "start":
            raw, s = cur.until(" ")
            if not raw.isdigit():
                cur.error(f"bad start {raw!r}", s)
            start = int(raw)
        elif key == "const":
            raw, s = cur.until(" ")
            const = _monomial_at(cur, raw, s)
        else:
            cur.error(f"unknown sum key {key!r}", at)
    for f in num + den:
        if f.length(start) < -1 or f.length.slope < 0:
            cur.error(f"factor {f} has length below -1")
    return SumSide(sign, qexp, num, den, start, const)


def _parse_prod(cur):
    terms = []
    while not cur.done():
        key, at = cur.word()
        if key != "term":
            cur.error(f"unknown product key {key!r}", at)
        cur.expect("=")
        terms.append(_term(cur))
    if not 1 <= len(terms) <= 2:
        cur.error("a product side has one or two terms")
    return ProductSide(tuple(terms))


def _parse_link(cur):
    subst, norm, shift = Fraction(1), None, Fraction(0)
    while not cur.done():
        key, at = cur.word()
        cur.expect("=")
        if key == "subst":
            raw, s = cur.until(" ")
            try:
                subst = Fraction(raw)
            except ValueError:
                cur.error(f"bad subst {raw!r}", s)
            if subst <= 0:
                cur.error("subst must be positive", s)
        elif key == "norm":
            norm = _term(cur)
        elif key == "shift":
            raw, s = cur.until(" ")
            try:
                shift = Fraction(raw)
            except ValueError:
                cur.error(f"bad shift {raw!r}", s)
        else:
            cur.error(f"unknown link key {key!r}", at)
    return Link(subst, norm, shift)


def _records(text):
    rec = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            if rec:
                yield rec
                rec = []
            continue
        rec.append((lineno, line))
    if rec:
        yield rec


def _build(rec):
    fields = {}
    for lineno, line in rec:
        m = re.match(r"^\s*([a-z]+)\s*:", line)
        if not m:
            raise CatalogSyntaxError("expected 'key: value'", lineno, 1, line)
        key = m.group(1)
        if key not in _KEYS:
            raise CatalogSyntaxError(f"unknown field {key!r}", lineno, m.start(1) + 1, line)
        if key in fields:
            raise CatalogSyntaxError(f"repeated field {key!r}", lineno, m.start(1) + 1, line)
        fields[key] = _Cursor(line[m.end():], lineno, m.end())
    first = rec[0][0]
    if set(fields) == {"theorem", "preset"}:
        return _build_preset(fields, first)
    for key in ("id", "sum", "prod"):
        if key not in fields:
            raise CatalogSyntaxError(f"record has no {key!r} field", first, 1)
    cur = fields["id"]
    label, at = cur.until(" ")
    if not _LABEL_RE.match(label) or not cur.done():
        cur.error(f"bad label {label!r}", at)
    aliases = ()
    if "alias" in fields:
        c = fields["alias"]
        raw, at = c.until("")
        aliases = tuple(x.strip() for x in raw.split(",") if x.strip())
        for a in aliases:
            if not _LABEL_RE.match(a):
                c.error(f"bad alias {a!r}", at)
    theorem = preset = None
    if "theorem" in fields:
        c = fields["theorem"]
        raw, at = c.until("")
        try:
            theorem = TheoremId.parse(raw)
        except ValueError:
            c.error(f"unknown theorem {raw!r}", at)
    if "preset" in fields:
        c = fields["preset"]
        raw, at = c.until("")
        try:
            preset = ParamAssignment.parse(raw)
        except ValueError as exc:
            c.error(str(exc), at)
        if theorem is not None:
            try:
                check_params(theorem, preset)
            except KeyError as exc:
                c.error(str(exc.args[0]), at)
    order = 200
    if "order" in fields:
        c = fields["order"]
        raw, at = c.until("")
        if not raw.isdigit() or int(raw) < 1:
            c.error(f"bad order {raw!r}", at)
        order = int(raw)
    link = _parse_link(fields["link"]) if "link" in fields else Link()
    return IdentityEntry(label, _parse_sum(fields["sum"]), _parse_prod(fields["prod"]),
                         theorem, preset, order, aliases, link, first)


@dataclass(frozen=True)
class TheoremPreset:
    theorem: TheoremId
    preset: ParamAssignment
    line: int = 0


def _build_preset(fields, first):
    c = fields["theorem"]
    raw, at = c.until("")
    try:
        theorem = TheoremId.parse(raw)
    except ValueError:
        c.error(f"unknown theorem {raw!r}", at)
    c = fields["preset"]
    raw, at = c.until("")
    try:
        preset = ParamAssignment.parse(raw)
        check_params(theorem, preset)
    except KeyError as exc:
        c.error(str(exc.args[0]), at)
    except ValueError as exc:
        c.error(str(exc), at)
    return TheoremPreset(theorem, preset, first)


def _parse_all(text):
    entries, presets = [], []
    seen = {}
    for rec in _records(text):
        e = _build(rec)
        if isinstance(e, TheoremPreset):
            presets.append(e)
            continue
        for lab in e.labels:
            if lab in seen:
                raise DuplicateLabel(f"{lab} on line {e.line} already defined on line {seen[lab]}")
            seen[lab] = e.line
        entries.append(e)
    return entries, presets


def parse_catalog(text):
    """Parse catalog text into IdentityEntry records; labels and aliases must be unique."""
    return _parse_all(text)[0]


def catalog_presets(text=None):
    """Distinct (theorem, preset) pairs from identity and standalone records, in file order."""
    entries, extra = _parse_all(default_catalog_text() if text is None else text)
    out = []
    items = [(e.source_theorem, e.preset, e.line) for e in entries if e.source_theorem]
    items += [(p.theorem, p.preset, p.line) for p in extra]
    for t, p, _ in sorted(items, key=lambda x: x[2]):
        if (t, p) not in out:
            out.append((t, p))
    return out


def default_catalog_text():
    return resources.files("qrr").joinpath("data/catalog.txt").read_text(encoding="utf-8")


def load_catalog(path=None):
    if path is None:
        return parse_catalog(default_catalog_text())
    with open(path, encoding="utf-8") as fh:
        return parse_catalog(fh.read())


def find(entries, label):
    for e in entries:
        if label in e.labels:
            return e
    raise KeyError(label)


# --- evaluation ------------------------------------------------------------

def _family(f, power):
    L = f.length
    if f.kind == "poch":
        return poch_family(f.base, f.qstep, L, power)
    if f.kind == "pm":
        return poch_family(f.base, 2 * f.qstep, L, power)
    return omega_family(f.base, f.qstep, L, power)


def _families(s):
    fams = [_family(f, 1) for f in s.num if f.kind != "bin"]
    fams += [_family(f, -1) for f in s.den if f.kind != "bin"]
    bins = [(f, 1) for f in s.num if f.kind == "bin"] + [(f, -1) for f in s.den if f.kind == "bin"]

    def extras(n):
        return [(ONE, f.base * Monomial(1, f.length(n)), p) for f, p in bins]
    return fams, (extras if bins else None)


def eval_sum_side(e, prec):
    """The sum side as a Series known below q^prec."""
    s = e.sum if isinstance(e, IdentityEntry) else e
    fams, extras = _families(s)
    return qsum(prec, fams, lambda n: Monomial(s.sign ** n, s.exponent(n)), extras,
                start=s.start, constant=s.const)


def eval_product_side(e, prec):
    """The product side (one or two terms) as a Series known below q^prec."""
    p = e.product if isinstance(e, IdentityEntry) else e
    out = monomial(0, 0, prec)
    for t in p.terms:
        out = out + t.series(prec)
    return out.truncate(prec)


def link_parts(e, order):
    """(theorem sum, expected sum, theorem rhs, expected rhs), all to q^order."""
    if e.source_theorem is None or e.preset is None:
        raise ValueError(f"{e.label} has no source theorem")
    pref, tsum, rhs = theorem_parts(e.source_theorem, e.preset, order)
    r = e.link.subst
    norm = e.link.norm.series(order) if e.link.norm else monomial(1, 0, order)
    inner = Fraction(order) / r
    es = substitute_q_power(eval_sum_side(e, inner), r)
    ep = substitute_q_power(eval_product_side(e, inner), r)
    shift = monomial(e.link.shift, 0, order)
    want_sum = (norm * es + shift).truncate(order)
    want_rhs = (pref * (norm * ep + shift)).truncate(order)
    return tsum.truncate(order), want_sum, rhs.truncate(order), want_rhs
