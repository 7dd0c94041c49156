"""Command-line front end: ``overpartlab verify|enumerate|series|bijection|grid``."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import combinatorics as cb
from . import hyperseries as hs
from . import verify as vf
from .combinatorics import ClassTag, InvalidParameters, Overpartition, ParameterSet
from .series import Substitution

ORDER_ENV = "OVERPARTLAB_ORDER"
DEFAULT_ORDER = 30

CHECK_ALIASES = {
    "main": ("main_theorem_u", "main_theorem_ubar"),
    "all": vf.CHECK_NAMES,
}

SERIES_CHOICES = ("u_claimed", "ubar_claimed", "u_product", "ubar_product", "gen_fun")


@dataclass
class CliConfig:
    subcommand: str
    params: ParameterSet | None = None
    order: int = DEFAULT_ORDER
    max_weight: int | None = None
    output: str = "human"
    grid_file: str | None = None


def _default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if not raw:
        return DEFAULT_ORDER
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{ORDER_ENV} must be an integer (got {raw!r})")


def _add_params(p: argparse.ArgumentParser, required=True):
    for name in "dkaef":
        p.add_argument(f"--{name}", type=int, required=required)


def build_parser() -> argparse.ArgumentParser:
    order = _default_order()
    ap = argparse.ArgumentParser(prog="overpartlab", description="Check overpartition q-series identities.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    v = sub.add_parser("verify", help="run identity checks")
    v.add_argument("--check", default="main",
                   help="check name, 'main' (both product formulas) or 'all'; one of: " + ", ".join(vf.CHECK_NAMES))
    _add_params(v, required=False)
    v.add_argument("--order", type=int, default=order)
    v.add_argument("--max-weight", type=int, default=None)
    v.add_argument("--term-index", type=int, default=None)
    v.add_argument("--output", choices=("human", "json"), default="human")
    v.add_argument("--grid", default=None, help="'default' or a JSON grid file")
    v.add_argument("--criterion", type=int, default=None, help="run the grid of one acceptance criterion (1-10)")
    v.add_argument("--jobs", type=int, default=1)

    e = sub.add_parser("enumerate", help="list the members of a class at one weight")
    e.add_argument("--tag", default="U", help="class tag: " + ", ".join(t.value for t in ClassTag))
    _add_params(e, required=False)
    e.add_argument("--weight", type=int, required=True)
    e.add_argument("--reading", default="literal")

    s = sub.add_parser("series", help="dump series coefficients as CSV rows x_deg,q_deg,coefficient")
    s.add_argument("--which", choices=SERIES_CHOICES, required=True)
    s.add_argument("--tag", default="U", help="class tag for --which gen_fun")
    _add_params(s)
    s.add_argument("--order", type=int, default=order)
    s.add_argument("--at-x-one", action="store_true", help="substitute x = 1 before dumping")

    b = sub.add_parser("bijection", help="apply the ones-deletion bijection or its inverse")
    _add_params(b)
    b.add_argument("--op", required=True, help="overpartition such as '4~+4+1' (~ marks the overlined copy)")
    b.add_argument("--inverse", action="store_true")
    b.add_argument("--case", type=int, choices=(0, 1), default=None, help="overline case for --inverse")

    g = sub.add_parser("grid", help="print the built-in grid as JSON")
    g.add_argument("--criterion", type=int, default=None)
    return ap


def _params(ns, required=True) -> ParameterSet | None:
    vals = [getattr(ns, n, None) for n in "dkaef"]
    if all(v is None for v in vals) and not required:
        return None
    missing = [n for n, v in zip("dkaef", vals) if v is None]
    if missing:
        raise InvalidParameters("missing parameter flags: " + " ".join(f"--{n}" for n in missing))
    return ParameterSet(*vals)


def cmd_verify(ns, out) -> int:
    if ns.grid or ns.criterion:
        grid = vf.grid_for(ns.criterion) if ns.criterion else vf.load_grid(ns.grid)
    else:
        p = _params(ns)
        names = CHECK_ALIASES.get(ns.check, (ns.check,))
        for n in names:
            if n not in vf.CHECK_NAMES:
                raise InvalidParameters(f"unknown check {n!r}")
        grid = [vf.CheckSpec(n, p, ns.order, ns.max_weight, ns.term_index) for n in names]
    reports = vf.run_all(grid, jobs=ns.jobs)
    if ns.output == "json":
        out.write(vf.reports_to_json(reports) + "\n")
    else:
        for r in reports:
            out.write(r.human() + "\n")
        counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped", "error")}
        out.write(" ".join(f"{k}={v}" for k, v in counts.items()) + "\n")
    return vf.exit_code(reports)


def _class_spec(ns, params):
    tag = ClassTag(ns.tag)
    if tag == ClassTag.ALL:
        return None
    if params is None:
        raise InvalidParameters("class enumeration needs --d --k --a --e --f")
    return cb.class_spec(tag, params, ns.reading)


def cmd_enumerate(ns, out) -> int:
    params = _params(ns, required=False)
    spec = _class_spec(ns, params)
    items = cb.enumerate_overpartitions(ns.weight) if spec is None else cb.enumerate_class(spec, ns.weight)
    for op in items:
        out.write(str(op) + "\n")
    out.write(f"count {len(items)}\n")
    return 0


def cmd_series(ns, out) -> int:
    p = _params(ns)
    N = ns.order
    which = ns.which
    if which == "u_claimed":
        s = hs.u_series_claimed(p, N)
    elif which == "ubar_claimed":
        s = hs.ubar_series_claimed(p, N)
    elif which == "u_product":
        s = hs.u_product_closed_form(p, N)
    elif which == "ubar_product":
        s = hs.ubar_product_closed_form(p, N)
    else:
        s = cb.gen_fun(ClassTag(ns.tag), p, N)
    if ns.at_x_one:
        s = s.substitute(Substitution.one())
    out.write(s.to_csv())
    return 0


def cmd_bijection(ns, out) -> int:
    p = _params(ns)
    op = Overpartition.parse(ns.op)
    if ns.inverse:
        if ns.case is None:
            raise InvalidParameters("--inverse needs --case 0 or --case 1")
        img = cb.bijection_inverse(op, p, ns.case)
        out.write(f"{img}\n")
    else:
        img = cb.bijection_forward(op, p)
        out.write(f"{img}\ncase {op.fbar(1)}\n")
    return 0


def cmd_grid(ns, out) -> int:
    grid = vf.grid_for(ns.criterion) if ns.criterion else vf.default_grid()
    out.write(vf.grid_to_json(grid) + "\n")
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "series": cmd_series,
    "bijection": cmd_bijection,
    "grid": cmd_grid,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ns = build_parser().parse_args(argv)
    try:
        return COMMANDS[ns.subcommand](ns, out)
    except (InvalidParameters, cb.BijectionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return vf.EXIT_USAGE
    except hs.TranscriptionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return vf.EXIT_ERROR
    except Exception as exc:  # pragma: no cover - reported as exit 3
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return vf.EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
