"""Command-line front end: verify, list, recognize, theorem, sweep."""

import argparse
import itertools
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .powerseries import InsufficientPrecision, equal_up_to, from_coefficients
from .productrec import NoPeriodicity, NotAUnit, recognize, split_two_term
from .qobjects import DivergentProduct, Monomial, ZERO, format_monomial, parse_monomial
from .registry import (CatalogSyntaxError, DuplicateLabel, eval_product_side, eval_sum_side,
                       load_catalog, parse_catalog)
from .transforms import MissingParameter, ParamAssignment, TheoremId, theorem_parts, theorem_sides


@dataclass
class Record:
    label: str
    ok: bool
    order: int
    mismatch: tuple = None
    ms: float = 0.0
    error: str = None

    @property
    def status(self):
        if self.error:
            return "ERROR"
        return "OK" if self.ok else "FAIL"

    def line(self, machine=False):
        if machine:
            cols = [self.label, self.status, str(self.order), f"{self.ms:.1f}"]
            if self.mismatch:
                cols += [str(x) for x in self.mismatch]
            if self.error:
                cols.append(self.error)
            return "\t".join(cols)
        out = f"{self.label:<20} {self.status:<5} order={self.order:<4} {self.ms:8.1f} ms"
        if self.mismatch:
            e, a, b = self.mismatch
            out += f"  first mismatch at q^{e}: sum {a}, product {b}"
        if self.error:
            out += f"  {self.error}"
        return out


@dataclass
class Report:
    records: list = field(default_factory=list)

    @property
    def counts(self):
        c = {"OK": 0, "FAIL": 0, "ERROR": 0}
        for r in self.records:
            c[r.status] += 1
        return c

    @property
    def ok(self):
        return all(r.status == "OK" for r in self.records)

    def render(self, machine=False):
        lines = [r.line(machine) for r in self.records]
        c = self.counts
        if machine:
            lines.append(f"#summary\t{len(self.records)}\t{c['OK']}\t{c['FAIL']}\t{c['ERROR']}")
        else:
            lines.append(f"{len(self.records)} identities: {c['OK']} OK, {c['FAIL']} FAIL, "
                         f"{c['ERROR']} ERROR")
        return "\n".join(lines)


def label_key(label):
    """Natural sort key: S.9 before S.10."""
    return [(0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.split(r"(\d+)", label)]


def verify_entry(entry, order=None):
    """Compare sum and product sides of one entry through q^order inclusive."""
    order = entry.default_order if order is None else order
    t = time.perf_counter()
    try:
        s = eval_sum_side(entry, order + 1)
        p = eval_product_side(entry, order + 1)
        ok, mm = equal_up_to(s, p, order + 1)
        err = None
    except (ArithmeticError, ValueError) as ex:
        ok, mm, err = False, None, f"{type(ex).__name__}: {ex}"
    return Record(entry.label, ok, order, mm, (time.perf_counter() - t) * 1000, err)


def _pool_map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(*x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_star, [(fn, x) for x in items]))


def _star(job):
    fn, args = job
    return fn(*args)


def _select(entries, ids):
    if not ids:
        return list(entries)
    index = {}
    for e in entries:
        for lab in e.labels:
            index[lab] = e
    missing = [i for i in ids if i not in index]
    if missing:
        raise KeyError(f"unknown label(s): {', '.join(missing)}")
    seen, out = set(), []
    for i in ids:
        e = index[i]
        if e.label not in seen:
            seen.add(e.label)
            out.append(e)
    return out


def cmd_verify(catalog=None, ids=(), order=None, jobs=1, text=None):
    """Verify the selected entries; returns (Report, exit status)."""
    entries = parse_catalog(text) if text is not None else load_catalog(catalog)
    chosen = sorted(_select(entries, ids), key=lambda e: label_key(e.label))
    recs = _pool_map(verify_entry, [(e, order) for e in chosen], jobs)
    rep = Report(recs)
    return rep, (0 if rep.ok else 1)


def cmd_list(catalog=None):
    lines = []
    for e in sorted(load_catalog(catalog), key=lambda e: label_key(e.label)):
        alias = f" (= {', '.join(e.aliases)})" if e.aliases else ""
        thm = e.source_theorem.name if e.source_theorem else "-"
        pre = str(e.preset) if e.preset else ""
        lines.append(f"{e.label}{alias}\t{thm}\t{pre}\torder {e.default_order}")
    return "\n".join(lines)


def read_coefficients(path):
    """Coefficients of q^0, q^1, ... from a whitespace or comma separated file."""
    with open(path) as fh:
        raw = fh.read().replace(",", " ").split()
    return [Fraction(x) for x in raw]


def _clip(kmax, max_modulus):
    m = min(max_modulus, kmax // 3)
    note = None if m == max_modulus else f"note: max modulus clipped to {m} (kmax {kmax} < 3 * {max_modulus})"
    return m, note


def cmd_recognize(source, kmax=100, max_modulus=24, catalog=None, two_term=False):
    """Recognize a label's sum side or a coefficient file as a product; returns text."""
    if isinstance(source, str) and not _looks_like_file(source):
        entry = _select(load_catalog(catalog), [source])[0]
        f = eval_sum_side(entry, kmax + 1)
    else:
        cs = read_coefficients(source)
        if len(cs) <= kmax:
            raise InsufficientPrecision(f"file has {len(cs)} coefficients, kmax {kmax} needs {kmax + 1}")
        f = from_coefficients(cs[:kmax + 1])
    mm, note = _clip(kmax, max_modulus)
    res = recognize(f, kmax, mm)
    lines = [note] if note else []
    lines.append(str(res))
    if two_term and isinstance(res, NoPeriodicity):
        tt = split_two_term(f, kmax, mm)
        lines.append(f"two-term: {tt}" if tt else "two-term: no fit")
    return "\n".join(lines), res


def _looks_like_file(s):
    import os
    return os.path.exists(s)


def cmd_theorem(tid, params, order=100, sequence=None):
    """Check one theorem instance; returns (text, exit status)."""
    tid = TheoremId.parse(tid) if isinstance(tid, str) else tid
    p = ParamAssignment.parse(params) if isinstance(params, str) else ParamAssignment(params)
    t = time.perf_counter()
    lhs, rhs = theorem_sides(tid, p, order + 1, sequence)
    ok, mm = equal_up_to(lhs, rhs, order + 1)
    ms = (time.perf_counter() - t) * 1000
    head = f"{tid.name} {p} order={order} {ms:.1f} ms"
    if ok:
        return f"OK   {head}", 0
    e, a, b = mm
    return f"FAIL {head}  first mismatch at q^{e}: lhs {a}, rhs {b}", 1


def grid_values(js=(), extra=()):
    """{0} together with +-q^(j/2) for j in js and any explicit monomials."""
    out = [ZERO]
    for j in js:
        for s in (1, -1):
            out.append(Monomial(s, Fraction(j, 2)))
    out += list(extra)
    uniq = []
    for v in out:
        if v not in uniq:
            uniq.append(v)
    return uniq


def sweep_point(tid, base, a, b, order, kmax, max_modulus):
    p = ParamAssignment(dict(base, a=a, b=b))
    head = f"a={format_monomial(a)} b={format_monomial(b)}"
    try:
        _, s, _ = theorem_parts(tid, p, max(order, kmax + 1))
        res = recognize(s, kmax, max_modulus)
    except (DivergentProduct, NotAUnit, InsufficientPrecision, ValueError, ArithmeticError) as ex:
        return f"{head}: error {type(ex).__name__}: {ex}"
    return f"{head}: candidate {res}"


def cmd_sweep(tid, params, values, order=100, kmax=80, max_modulus=24, jobs=1):
    """Run recognition over unordered (a, b) grid pairs; returns printed lines."""
    tid = TheoremId.parse(tid) if isinstance(tid, str) else tid
    base = ParamAssignment.parse(params) if isinstance(params, str) else ParamAssignment(params)
    base = {k: v for k, v in base.items() if k not in ("a", "b")}
    mm, note = _clip(kmax, max_modulus)
    pts = [(tid, base, a, b, order, kmax, mm) for a, b in itertools.combinations_with_replacement(values, 2)]
    lines = _pool_map(sweep_point, pts, jobs)
    return ([note] if note and pts else []) + lines


def _parser():
    ap = argparse.ArgumentParser(prog="qrr", description=__doc__)
    ap.add_argument("--catalog", help="catalog file (default: the shipped catalog)")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check sum side = product side")
    v.add_argument("--id", action="append", default=[], help="label to check (repeatable)")
    v.add_argument("--order", type=int, help="override every entry's order")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--machine", action="store_true", help="tab-separated report")

    sub.add_parser("list", help="list catalog entries")

    r = sub.add_parser("recognize", help="recognize a product from a sum side or coefficient file")
    r.add_argument("source", help="catalog label or coefficient file")
    r.add_argument("--kmax", type=int, default=100)
    r.add_argument("--max-modulus", type=int, default=24)
    r.add_argument("--two-term", action="store_true", help="also try a two-theta split")

    t = sub.add_parser("theorem", help="check one theorem instance")
    t.add_argument("theorem")
    t.add_argument("params", nargs="*", help="key=value monomials, e.g. alpha=q^2 a=0 b=-q")
    t.add_argument("--order", type=int, default=100)
    t.add_argument("--sequence", help="comma separated A_0, A_1, ... for LIU_MASTER")

    s = sub.add_parser("sweep", help="recognize theorem sums over an (a, b) grid")
    s.add_argument("theorem")
    s.add_argument("params", nargs="*", help="fixed parameters other than a, b")
    s.add_argument("--j", default="", help="comma separated j for the values +-q^(j/2)")
    s.add_argument("--values", default="", help="extra comma separated monomials")
    s.add_argument("--order", type=int, default=100)
    s.add_argument("--kmax", type=int, default=80)
    s.add_argument("--max-modulus", type=int, default=24)
    s.add_argument("--jobs", type=int, default=1)
    return ap


def _csv(text, conv):
    return [conv(x.strip()) for x in text.split(",") if x.strip()]


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            rep, status = cmd_verify(args.catalog, args.id, args.order, args.jobs)
            print(rep.render(args.machine))
            return status
        if args.command == "list":
            print(cmd_list(args.catalog))
            return 0
        if args.command == "recognize":
            text, _ = cmd_recognize(args.source, args.kmax, args.max_modulus, args.catalog, args.two_term)
            print(text)
            return 0
        if args.command == "theorem":
            seq = None
            if args.sequence:
                vals = _csv(args.sequence, parse_monomial)
                seq = lambda k: vals[k] if k < len(vals) else ZERO
            text, status = cmd_theorem(args.theorem, " ".join(args.params), args.order, seq)
            print(text)
            return status
        if args.command == "sweep":
            vals = grid_values(_csv(args.j, int), _csv(args.values, parse_monomial))
            if not args.j and not args.values:
                vals = []
            for line in cmd_sweep(args.theorem, " ".join(args.params), vals, args.order,
                                  args.kmax, args.max_modulus, args.jobs):
                print(line)
            return 0
    except (CatalogSyntaxError, DuplicateLabel) as ex:
        print(f"catalog error: {ex}", file=sys.stderr)
        return 2
    except MissingParameter as ex:
        print(f"missing parameter: {ex.args[0] if ex.args else ex}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, ArithmeticError, OSError) as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
