"""Command-line front end.

Subcommands: moment, log-moment, compare-schemes, table, singularity.
Exit codes: 0 ok, 2 usage, 3 invalid request, 4 numerical failure,
5 scheme disagreement above the tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import closed_form as cf
from . import log_moments as lm
from . import schemes_numeric as sn
from .distributions import DistributionSpec, canonical_kind, mellin_strip, validate
from .errors import (AtPoleError, ContourPoleError, HigherOrderPoleError, NotASingularityError,
                     OutsideStripError, RenMomentError, UnsupportedError, ValidationError)
from .specfun import as_complex

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_NUMERIC = 4
EXIT_TOLERANCE = 5

FORMATS = ("json", "csv", "pretty")
MOMENT_SCHEMES = ("closed-form", "subtraction", "cutoff", "weighted", "mellin-cf", "mellin-density")
TABLES = ("cauchy-moments", "levy-moments", "qexp-moments", "qgauss-moments", "negative-moments",
          "log-moments", "cauchy-log-moments")
MAX_ORDERS = 16
DEFAULT_TOL = 1e-5
TOL_ENV = "RENMOMENT_TOL"

_INVALID = (ValidationError, NotASingularityError, AtPoleError, HigherOrderPoleError, OutsideStripError,
            UnsupportedError, ContourPoleError)


class UsageError(Exception):
    """Malformed command line (exit code 2)."""


@dataclass
class JobRequest:
    """Parsed command: distribution, orders, scheme selection and output options."""

    command: str
    spec: DistributionSpec | None
    orders: list = field(default_factory=list)
    schemes: tuple = ()
    fmt: str = "json"
    quad: sn.QuadratureConfig = field(default_factory=sn.QuadratureConfig)
    tol: float = DEFAULT_TOL


# ---------------------------------------------------------------------------
# parsing

def parse_order(text: str) -> complex:
    """Parse '2', '-0.5', '1+0.5i' or '1+0.5j' into a complex order."""
    try:
        return as_complex(complex(text.strip().replace(" ", "").replace("i", "j")))
    except (ValueError, RenMomentError) as exc:
        raise UsageError(f"cannot parse order {text!r}") from exc


def parse_orders(text: str) -> list:
    """Parse one order, a comma list, or an inclusive integer range 'a..b'."""
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            a, b = int(lo), int(hi)
        except ValueError as exc:
            raise UsageError(f"order range must be 'a..b' with integers, got {text!r}") from exc
        if b < a:
            raise UsageError(f"empty order range {text!r}")
        orders = [complex(k, 0.0) for k in range(a, b + 1)]
    else:
        parts = text.split(",")
        if len(parts) > 1 and not all(part.strip() for part in parts):
            raise UsageError(f"empty item in order list {text!r}")
        orders = [parse_order(part) for part in parts if part.strip()]
    if not orders:
        raise UsageError("no order given")
    if len(orders) > MAX_ORDERS:
        raise UsageError(f"at most {MAX_ORDERS} orders per request, got {len(orders)}")
    return orders


def _spec_from_args(args, defaults=None):
    if getattr(args, "spec", None):
        return DistributionSpec.from_json(args.spec)
    if not getattr(args, "dist", None):
        return None
    params = dict(defaults or {})
    for name in ("lambda", "q", "beta", "mu", "nu"):
        value = getattr(args, name.replace("lambda", "lam"), None)
        if value is not None:
            params[name] = value
    spec = DistributionSpec(args.dist, params)
    validate(spec)
    return spec


def _tolerance(args) -> float:
    if getattr(args, "tol", None) is not None:
        tol = args.tol
    elif os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError as exc:
            raise UsageError(f"{TOL_ENV} must be a number, got {os.environ[TOL_ENV]!r}") from exc
    else:
        tol = DEFAULT_TOL
    if not tol > 0:
        raise UsageError("tolerance must be positive")
    return tol


def _quad_from_args(args) -> sn.QuadratureConfig:
    base = sn.QuadratureConfig()
    return sn.QuadratureConfig(
        rel_tol=args.rel_tol if args.rel_tol is not None else base.rel_tol,
        abs_tol=args.abs_tol if args.abs_tol is not None else base.abs_tol,
        max_subdivisions=args.max_subdivisions if args.max_subdivisions is not None else base.max_subdivisions,
        semi_infinite_transform=args.transform or base.semi_infinite_transform,
    )


# ---------------------------------------------------------------------------
# rendering

def _num(x):
    """Float rounded to 15 significant digits, printed shortest-roundtrip."""
    if x is None:
        return None
    x = float(f"{float(x):.15g}")
    return 0.0 if x == 0.0 else x


def _cval(z):
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def _fmt_complex(z) -> str:
    z = complex(z)
    re, im = _num(z.real), _num(z.imag)
    sign = "-" if im < 0 else "+"
    return f"{re!r} {sign} {abs(im)!r}i"


def _dump_json(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, separators=(", ", ": "))


def _dump_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if v is None else (json.dumps(v) if isinstance(v, dict) else v) for v in row])
    return buf.getvalue()


def _dump_pretty(columns, rows) -> str:
    cells = [[str(c) for c in columns]]
    for row in rows:
        cells.append(["-" if v is None else (json.dumps(v) if isinstance(v, dict) else str(v)) for v in row])
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells) + "\n"


def _result_record(spec, order, scheme, value, err, classification):
    return {"distribution": spec.to_dict(), "order": _cval(order), "scheme": scheme,
            "value": _cval(value), "err_estimate": _num(err), "classification": classification}


_RECORD_COLUMNS = ("distribution", "order_re", "order_im", "scheme", "value_re", "value_im",
                   "err_estimate", "classification")


def _record_row(rec):
    return [rec["distribution"], rec["order"]["re"], rec["order"]["im"], rec["scheme"],
            rec["value"]["re"], rec["value"]["im"], rec["err_estimate"], rec["classification"]]


def _render_records(records, fmt):
    if fmt == "json":
        return _dump_json(records[0] if len(records) == 1 else records) + "\n"
    rows = [_record_row(r) for r in records]
    if fmt == "csv":
        return _dump_csv(_RECORD_COLUMNS, rows)
    pretty_rows = [[r["distribution"]["kind"], _fmt_complex(complex(r["order"]["re"], r["order"]["im"])),
                    r["scheme"], _fmt_complex(complex(r["value"]["re"], r["value"]["im"])),
                    r["err_estimate"], r["classification"]] for r in records]
    return _dump_pretty(("distribution", "order", "scheme", "value", "err_estimate", "classification"),
                        pretty_rows)


# ---------------------------------------------------------------------------
# computations

def _real_order(z: complex, scheme: str) -> float:
    if z.imag != 0.0:
        raise ValidationError(f"scheme {scheme} needs a real order, got {z}")
    return z.real


def run_scheme(spec: DistributionSpec, z: complex, scheme: str, quad: sn.QuadratureConfig):
    """(value, err_estimate, classification) of one scheme at order z."""
    if scheme == "closed-form":
        mv = cf.renormalized_moment(spec, z)
        return mv.value, None, mv.classification
    if scheme == "subtraction":
        res = sn.subtraction_scheme(spec, _real_order(z, scheme), quad)
    elif scheme == "cutoff":
        res = sn.cutoff_scheme(spec, _real_order(z, scheme))
    elif scheme == "weighted":
        res = sn.weighted_scheme(spec, _real_order(z, scheme))
    elif scheme == "mellin-cf":
        res = sn.mellin_cf_numeric(spec, z, quad)
    elif scheme == "mellin-density":
        res = sn.mellin_density_numeric(spec, z, quad)
    else:
        raise ValidationError(f"unknown scheme {scheme!r}; expected one of {MOMENT_SCHEMES}")
    return complex(res.value), res.err_estimate, None


def _applicable(spec, z, scheme) -> str | None:
    """Reason a scheme cannot run at z, or None if it applies."""
    if scheme in ("subtraction", "cutoff", "weighted") and z.imag != 0.0:
        return "needs a real order"
    if scheme == "mellin-density":
        lo, hi = mellin_strip(spec)
        if not lo < z.real < hi:
            return f"order outside the strip ({lo:g}, {hi:g})"
    if scheme == "mellin-cf" and not -1.0 < z.real < 0.0:
        return "order outside the strip (-1, 0)"
    return None


def cmd_moment(req: JobRequest) -> tuple:
    records = []
    for z in req.orders:
        value, err, cls = run_scheme(req.spec, z, req.schemes[0], req.quad)
        records.append(_result_record(req.spec, z, req.schemes[0], value, err, cls))
    return _render_records(records, req.fmt), EXIT_OK


def cmd_compare_schemes(req: JobRequest) -> tuple:
    rows = []
    worst = 0.0
    for z in req.orders:
        values, skipped = {}, {}
        for scheme in req.schemes:
            reason = _applicable(req.spec, z, scheme)
            if reason is None:
                try:
                    values[scheme] = run_scheme(req.spec, z, scheme, req.quad)[0]
                except UnsupportedError as exc:
                    reason = str(exc)
            if reason is not None:
                skipped[scheme] = reason
        vals = list(values.values())
        scale = max([1.0] + [abs(v) for v in vals])
        dev = max([abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:]] + [0.0]) / scale
        worst = max(worst, dev)
        rows.append({"order": _cval(z), "values": {k: _cval(v) for k, v in values.items()},
                     "skipped": skipped, "max_deviation": _num(dev)})
    ok = worst <= req.tol
    payload = {"distribution": req.spec.to_dict(), "tolerance": _num(req.tol), "max_deviation": _num(worst),
               "within_tolerance": ok, "rows": rows}
    code = EXIT_OK if ok else EXIT_TOLERANCE
    if req.fmt == "json":
        return _dump_json(payload) + "\n", code
    columns = ("order_re", "order_im", "scheme", "value_re", "value_im", "max_deviation")
    flat = []
    for row in rows:
        for scheme in req.schemes:
            v = row["values"].get(scheme)
            flat.append([row["order"]["re"], row["order"]["im"], scheme,
                         None if v is None else v["re"], None if v is None else v["im"], row["max_deviation"]])
    out = _dump_csv(columns, flat) if req.fmt == "csv" else _dump_pretty(columns, flat)
    return out, code


def cmd_log_moment(req: JobRequest, route: str) -> tuple:
    records = []
    for z in req.orders:
        if z.imag != 0.0 or z.real != round(z.real):
            raise ValidationError(f"log-moment orders are positive integers, got {z}")
        n = int(z.real)
        routes = ("derivative-of-power", "direct-integral") if route == "both" else (route,)
        for r in routes:
            if r == "derivative-of-power":
                val = lm.log_moment_from_power(req.spec, n)
            else:
                val = lm.log_moment_direct(req.spec, n, req.quad)
            records.append({"distribution": req.spec.to_dict(), "order": n, "route": r,
                            "value": _cval(complex(val.value)), "err_estimate": _num(val.err_estimate)})
    if req.fmt == "json":
        return _dump_json(records[0] if len(records) == 1 else records) + "\n", EXIT_OK
    columns = ("distribution", "order", "route", "value_re", "value_im", "err_estimate")
    rows = [[r["distribution"] if req.fmt == "csv" else r["distribution"]["kind"], r["order"], r["route"],
             r["value"]["re"], r["value"]["im"], r["err_estimate"]] for r in records]
    return (_dump_csv if req.fmt == "csv" else _dump_pretty)(columns, rows), EXIT_OK


def cmd_singularity(req: JobRequest, q_order) -> tuple:
    spec = req.spec
    if q_order is not None:
        mv = cf.q_singularity_finite_part(spec, q_order)
        z = complex(q_order, 0.0)
    else:
        if len(req.orders) != 1:
            raise UsageError("singularity takes a single --order")
        z = req.orders[0]
        mv = cf.finite_part_at_pole(spec, z)
    rec = _result_record(spec, z, "closed-form", mv.value, None, mv.classification)
    return _render_records([rec], req.fmt), EXIT_OK


# ---------------------------------------------------------------------------
# tables

_Q_FORMULAS = {
    1: "-1/(lambda (2q-3))",
    2: "2/(lambda^2 (2q-3)(3q-4))",
    3: "-6/(lambda^3 (2q-3)(3q-4)(4q-5))",
    4: "24/(lambda^4 (2q-3)(3q-4)(4q-5)(5q-6))",
}
_QG_FORMULAS = {1: "0", 2: "2 beta^2/(5-3q)", 3: "0", 4: "12 beta^4/(15q^2-46q+35)"}
_NEGATIVE_FORMULAS = {
    "Normal": {1: "-i sqrt(pi/2)", 2: "-1", 3: "(i/2) sqrt(pi/2)", 4: "1/3"},
    "StudentT": {1: "-i pi/(sqrt(nu) B(nu/2, 1/2))", 2: "-1",
                 3: "i sqrt(pi) Gamma((nu+3)/2)/(nu^(3/2) Gamma(nu/2))", 4: "(2+nu)/(3 nu)"},
    "Laplace": {1: "-i (pi/2) lambda", 2: "lambda^2 (ln lambda - i pi/2 + gamma_E - 1)",
                3: "-i (pi/4) lambda^3", 4: "(lambda^4/6)(ln lambda - i pi/2 + gamma_E - 11/6)"},
}
_TABLE_DEFAULTS = {
    "qexp-moments": ("QExponential", {"lambda": 1.0, "q": 1.75}),
    "qgauss-moments": ("QGaussian", {"q": 2.2, "beta": 1.0, "mu": 0.0}),
}
_NEGATIVE_DEFAULTS = {"StudentT": {"nu": 5.0}, "Laplace": {"lambda": 1.0, "mu": 0.0}}


def table_rows(name: str, spec: DistributionSpec | None = None):
    """(spec, rows) for a named table; rows are (order, value, source_eq)."""
    if name == "cauchy-moments":
        spec = DistributionSpec("Cauchy")
        return spec, [(n, cf.renormalized_moment(spec, n).value, "e^{i pi n/2}") for n in range(1, 5)]
    if name == "levy-moments":
        spec = DistributionSpec("Levy")
        return spec, [(n, cf.renormalized_moment(spec, n).value, "Gamma(1/2-n) 2^-n / sqrt(pi)")
                      for n in range(1, 5)]
    if name in _TABLE_DEFAULTS:
        kind, defaults = _TABLE_DEFAULTS[name]
        if spec is None:
            spec = DistributionSpec(kind, defaults)
        elif spec.kind != kind:
            raise ValidationError(f"table {name} needs a {kind} distribution, got {spec.kind}")
        formulas = _Q_FORMULAS if kind == "QExponential" else _QG_FORMULAS
        return spec, [(n, cf.renormalized_moment(spec, n).value, formulas[n]) for n in range(1, 5)]
    if name == "negative-moments":
        if spec is None:
            raise UsageError("table negative-moments needs --dist normal, student-t or laplace")
        if spec.kind not in _NEGATIVE_FORMULAS:
            raise ValidationError(f"negative-moments covers Normal, StudentT and Laplace, got {spec.kind}")
        return spec, [(-n, cf.finite_part_at_pole(spec, -n).value, _NEGATIVE_FORMULAS[spec.kind][n])
                      for n in range(1, 5)]
    if name == "cauchy-log-moments":
        spec = DistributionSpec("Cauchy")
        name, gold = "log-moments", lm.golden_log_moments(spec)
    elif name == "log-moments":
        if spec is None:
            raise UsageError("table log-moments needs --dist")
        gold = lm.golden_log_moments(spec)
    else:
        raise ValidationError(f"unknown table {name!r}; expected one of {TABLES}")
    return spec, [(g.order, complex(lm.log_moment_from_power(spec, g.order).value), g.formula) for g in gold]


def _table_spec(name, args):
    if name in _TABLE_DEFAULTS and not args.spec:
        kind, defaults = _TABLE_DEFAULTS[name]
        args.dist = args.dist or kind
        return _spec_from_args(args, defaults if canonical_kind(args.dist) == kind else None)
    if name == "negative-moments" and args.dist and not args.spec:
        return _spec_from_args(args, _NEGATIVE_DEFAULTS.get(canonical_kind(args.dist)))
    return _spec_from_args(args)


TABLE_CHOP = 1e-12


def _chop(v: complex) -> complex:
    """Zero a component below TABLE_CHOP relative to |v| (contour and finite-part noise)."""
    cut = TABLE_CHOP * abs(v)
    return complex(v.real if abs(v.real) > cut else 0.0, v.imag if abs(v.imag) > cut else 0.0)


def cmd_table(name: str, spec, fmt: str) -> tuple:
    spec, rows = table_rows(name, spec)
    records = []
    for n, v, src in rows:
        v = _chop(complex(v))
        records.append({"order": n, "value_re": _num(v.real), "value_im": _num(v.imag), "source_eq": src})
    if fmt == "json":
        payload = {"table": name, "distribution": spec.to_dict(), "rows": records}
        return _dump_json(payload) + "\n", EXIT_OK
    columns = ("order", "value_re", "value_im", "source_eq")
    flat = [[r[c] for c in columns] for r in records]
    return (_dump_csv if fmt == "csv" else _dump_pretty)(columns, flat), EXIT_OK


# ---------------------------------------------------------------------------
# argument parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p, orders=True):
    g = p.add_argument_group("distribution")
    g.add_argument("--dist", help="cauchy, levy, qexp, qgauss, normal, student-t, laplace")
    g.add_argument("--spec", help='distribution as JSON, e.g. \'{"kind": "StudentT", "params": {"nu": 5}}\'')
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--q", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--mu", type=float)
    g.add_argument("--nu", type=float)
    if orders:
        p.add_argument("--order", help="order z: '2', '-1', '0.25', '1+0.5i', '1,2,3' or range '1..4'")
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    q = p.add_argument_group("quadrature")
    q.add_argument("--rel-tol", type=float)
    q.add_argument("--abs-tol", type=float)
    q.add_argument("--max-subdivisions", type=int)
    q.add_argument("--transform", choices=sn.TRANSFORMS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="renmoment", description="Renormalized moments of heavy-tailed distributions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("moment", help="renormalized moment by one scheme")
    _add_common(p)
    p.add_argument("--scheme", choices=MOMENT_SCHEMES, default="closed-form")

    p = sub.add_parser("log-moment", help="logarithmic moment")
    _add_common(p)
    p.add_argument("--route", choices=("derivative-of-power", "direct-integral", "both"),
                   default="derivative-of-power")

    p = sub.add_parser("compare-schemes", help="all applicable schemes side by side")
    _add_common(p)
    p.add_argument("--schemes", help=f"comma list from {', '.join(MOMENT_SCHEMES)} (default: all)")
    p.add_argument("--tol", type=float, help=f"max allowed deviation (default ${TOL_ENV} or {DEFAULT_TOL})")

    p = sub.add_parser("table", help="reproduce a named list of moments")
    p.add_argument("name", choices=TABLES)
    _add_common(p, orders=False)

    p = sub.add_parser("singularity", help="finite part at a pole in z or a singular q")
    _add_common(p)
    p.add_argument("--n", type=int, help="integer moment order for a singularity in q (uses the spec's q)")
    return parser


def _request(args) -> JobRequest:
    spec = _spec_from_args(args)
    if spec is None:
        raise UsageError(f"{args.command} needs --dist or --spec")
    orders = []
    if getattr(args, "order", None) is not None:
        orders = parse_orders(args.order)
    elif args.command in ("moment", "log-moment", "compare-schemes"):
        raise UsageError(f"{args.command} needs --order")
    schemes = ()
    if args.command == "moment":
        schemes = (args.scheme,)
    elif args.command == "compare-schemes":
        schemes = MOMENT_SCHEMES
        if args.schemes:
            schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
            bad = [s for s in schemes if s not in MOMENT_SCHEMES]
            if bad:
                raise UsageError(f"unknown schemes {bad}; expected {MOMENT_SCHEMES}")
    tol = _tolerance(args) if args.command == "compare-schemes" else DEFAULT_TOL
    return JobRequest(args.command, spec, orders, schemes, args.fmt, _quad_from_args(args), tol)


def run(argv=None) -> tuple:
    """Execute a command line; returns (stdout text, stderr text, exit code)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: moment, log-moment, compare-schemes, table, singularity")
        if args.command == "table":
            out, code = cmd_table(args.name, _table_spec(args.name, args), args.fmt)
            return out, "", code
        req = _request(args)
        if req.command == "moment":
            out, code = cmd_moment(req)
        elif req.command == "compare-schemes":
            out, code = cmd_compare_schemes(req)
        elif req.command == "log-moment":
            out, code = cmd_log_moment(req, args.route)
        else:
            if args.n is not None and req.orders:
                raise UsageError("give either --order or --n, not both")
            if args.n is None and not req.orders:
                raise UsageError("singularity needs --order or --n")
            out, code = cmd_singularity(req, args.n)
        err = "" if code == EXIT_OK else "error: scheme deviation exceeds the tolerance\n"
        return out, err, code
    except UsageError as exc:
        return "", f"usage error: {exc}\n", EXIT_USAGE
    except NotASingularityError as exc:
        return "", f"error: not-a-singularity: {exc}\n", EXIT_INVALID
    except _INVALID as exc:
        return "", f"error: {type(exc).__name__}: {exc}\n", EXIT_INVALID
    except RenMomentError as exc:
        return "", f"error: numerical failure: {type(exc).__name__}: {exc}\n", EXIT_NUMERIC


def main(argv=None) -> int:
    out, err, code = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
