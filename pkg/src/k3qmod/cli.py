"""``k3qmod`` command line: expand series, apply operators, run verification suites.

Series are exchanged as JSON documents::

    {"valuation": -1, "order": 2, "coefficients": ["1", "24", "324", "3200"],
     "metadata": {"level": 1, "weight": -12, "poleOrder": 1}}
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import catalogue as cat
from .hecke import hecke_t, t_wrong
from .modforms import (
    MembershipError, ddc2, decompose, discriminant, eisenstein_c, generator_series,
    inverse_discriminant, to_qseries,
)
from .potentials import F, ONE, POINT, W, Insertion, ReductionError, apply_mcf, degree_data, tau, uperp, uperp_dual
from .qseries import PrecisionError, QSeries, b_op, dq, u_op
from .verify import SUITES, run_suite

__all__ = ["SeriesDocument", "main", "parse_insertions"]

DEFAULT_ORDER = 50
META_KEYS = ("name", "level", "weight", "poleOrder")


class DocumentError(ValueError):
    pass


def _fmt(c: Fraction) -> str:
    return str(c)  # Fraction prints in lowest terms and omits a unit denominator


@dataclass
class SeriesDocument:
    valuation: int
    order: int
    coefficients: list[str]
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_series(cls, s: QSeries, **metadata) -> SeriesDocument:
        meta = {k: metadata[k] for k in META_KEYS if metadata.get(k) is not None}
        return cls(s.valuation, s.order, [_fmt(c) for c in s.coeffs], meta)

    def to_series(self) -> QSeries:
        return QSeries(self.valuation, [Fraction(c) for c in self.coefficients])

    def to_json(self, pretty: bool = False) -> str:
        data = {
            "valuation": self.valuation,
            "order": self.order,
            "coefficients": self.coefficients,
            "metadata": {k: self.metadata[k] for k in META_KEYS if k in self.metadata},
        }
        if pretty:
            return json.dumps(data, indent=2, ensure_ascii=False)
        return json.dumps(data, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> SeriesDocument:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not a JSON document: {exc}") from exc
        try:
            val, order, coeffs = int(data["valuation"]), int(data["order"]), list(data["coefficients"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed series document: {exc}") from exc
        if len(coeffs) != order - val + 1:
            raise DocumentError(f"expected {order - val + 1} coefficients, found {len(coeffs)}")
        try:
            canon = [_fmt(Fraction(str(c))) for c in coeffs]
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad coefficient: {exc}") from exc
        meta = data.get("metadata") or {}
        unknown = set(meta) - set(META_KEYS)
        if unknown:
            raise DocumentError(f"unknown metadata keys {sorted(unknown)}")
        return cls(val, order, canon, dict(meta))


# ---------------------------------------------------------------- series names


_BUILTINS = {
    "C2": (1, 2, 0), "C4": (1, 4, 0), "C6": (1, 6, 0), "Delta": (1, 12, 0),
    "X2": (2, 2, 0), "X4": (2, 4, 0), "InvDelta": (1, -12, 1),
}


def builtin_series(name: str, order: int) -> QSeries:
    if name in ("C2", "C4", "C6"):
        return eisenstein_c(int(name[1:]), order)
    if name in ("X2", "X4"):
        return generator_series(name, order)
    if name == "Delta":
        return discriminant(order)
    if name == "InvDelta":
        return inverse_discriminant(order)
    raise KeyError(name)


def series_by_name(name: str, order: int) -> SeriesDocument:
    if name in _BUILTINS:
        level, weight, pole = _BUILTINS[name]
        s = builtin_series(name, order)
    elif name in cat.NAMED_KEYS:
        key = cat.NAMED_KEYS[name]
        _, _, _, weight = degree_data(key.g, key.insertions)
        level, pole = key.m, key.m
        s = cat.named_series(name, order)
    elif name.startswith("FE_") and name[3:].isdigit():
        g = int(name[3:])
        level, weight, pole = 1, 2 * g, 0
        s = cat.fiber_series(g, order)
    else:
        known = ", ".join(list(_BUILTINS) + list(cat.NAMED_KEYS) + ["FE_<g>"])
        raise cat.UncataloguedError(f"unknown series {name!r}; known: {known}")
    return SeriesDocument.from_series(s, name=name, level=level, weight=weight, poleOrder=pole)


# ---------------------------------------------------------------- apply


_CLASS_TOKENS = {"1": ONE, "F": F, "W": W, "p": POINT}


def parse_insertions(text: str) -> tuple[Insertion, ...]:
    """Parse ``"p,p"`` or ``"1:F,W,e3,e^3"`` (``a:cls`` sets the descendent power)."""
    out = []
    for token in filter(None, (t.strip() for t in text.split(","))):
        a, _, cls = token.rpartition(":")
        power = int(a) if a else 0
        if cls in _CLASS_TOKENS:
            c = _CLASS_TOKENS[cls]
        elif cls.startswith("e^") and cls[2:].isdigit():
            c = uperp_dual(int(cls[2:]))
        elif cls.startswith("e") and cls[1:].isdigit():
            c = uperp(int(cls[1:]))
        else:
            raise ValueError(f"unknown insertion class {cls!r}")
        out.append(tau(power, c))
    return tuple(out)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"operator {args.op} needs " + ", ".join("-" + n if len(n) == 1 else "--" + n for n in missing))


def apply_operator(args, doc: SeriesDocument) -> SeriesDocument:
    f = doc.to_series()
    meta = doc.metadata
    level, weight, pole = meta.get("level"), meta.get("weight"), meta.get("poleOrder")
    op = args.op
    if op == "dq":
        out = dq(f)
        weight = None if weight is None else weight + 2
    elif op == "b":
        _need(args, "d")
        out = b_op(args.d, f)
        level = None if level is None else level * args.d
        pole = None if pole is None else pole * args.d
    elif op == "u":
        _need(args, "d")
        out = u_op(args.d, f)
        level = weight = pole = None
    elif op == "hecke":
        _need(args, "m", "k")
        out = hecke_t(args.m, args.k, f)
        pole = None if pole is None else pole * args.m
    elif op == "twrong":
        _need(args, "m", "l")
        out = t_wrong(args.m, args.l, f)
        level = None if level is None else lcm(level, args.m)
        pole = None if pole is None else pole * args.m
    elif op == "mcf":
        _need(args, "g", "m")
        ins = parse_insertions(args.insertions or "")
        out = apply_mcf(f, args.g, args.m, ins)
        _, _, _, weight = degree_data(args.g, ins)
        level = None if level is None else lcm(level, args.m)
        pole = None if pole is None else pole * args.m
    elif op == "ddc2":
        level = args.level if args.level is not None else level
        weight = args.weight if args.weight is not None else weight
        pole = args.pole if args.pole is not None else pole
        if None in (level, weight, pole):
            raise ValueError("ddc2 needs --level, --weight and --pole (or input metadata)")
        form = decompose(f, level, weight, pole)
        out = to_qseries(ddc2(form), f.order)
        weight -= 2
    else:  # pragma: no cover - argparse restricts the choices
        raise ValueError(op)
    if args.order is not None and out.order > args.order:
        out = out.truncate(args.order)
    return SeriesDocument.from_series(out, level=level, weight=weight, poleOrder=pole)


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3qmod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", help="expand a named series")
    s.add_argument("name")
    s.add_argument("--order", type=int, default=DEFAULT_ORDER)
    s.add_argument("--pretty", action="store_true")

    a = sub.add_parser("apply", help="apply an operator to a series document")
    a.add_argument("op", choices=["dq", "b", "u", "hecke", "twrong", "mcf", "ddc2"])
    a.add_argument("input", nargs="?", help="document file (default: standard input)")
    a.add_argument("-d", type=int)
    a.add_argument("-m", type=int)
    a.add_argument("-k", type=int)
    a.add_argument("-l", type=int)
    a.add_argument("-g", type=int)
    a.add_argument("--insertions", help='e.g. "p,p" or "1:F"')
    a.add_argument("--level", type=int)
    a.add_argument("--weight", type=int)
    a.add_argument("--pole", type=int)
    a.add_argument("--order", type=int, help="truncate the result to this order")
    a.add_argument("--pretty", action="store_true")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--order", type=int, default=DEFAULT_ORDER)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "series":
            print(series_by_name(args.name, args.order).to_json(args.pretty))
            return 0
        if args.command == "apply":
            if args.input:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
            else:
                text = sys.stdin.read()
            doc = SeriesDocument.from_json(text)
            print(apply_operator(args, doc).to_json(args.pretty))
            return 0
        names = list(SUITES) if args.suite == "all" else [args.suite]
        ok = True
        for name in names:
            report = run_suite(name, args.order)
            print(report.format())
            ok = ok and report.ok
        return 0 if ok else 1
    except (DocumentError, PrecisionError, MembershipError, ReductionError,
            cat.UncataloguedError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"k3qmod: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
