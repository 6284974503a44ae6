"""Command-line entry point.

Every subcommand writes machine-readable output (JSON by default, CSV for
tabular results) to stdout or ``--out``.  Exit status: 0 on success, 1 when a
verification case fails or a computation does not converge, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__, bessel, harmonic, polyalg, suites, transforms, zonal
from .gegenbauer import gegenbauer as gegenbauer_poly
from .gegenbauer import gegenbauer_eval

__all__ = ["CommandConfig", "build_parser", "main", "run"]

FORMATS = ("json", "csv", "pretty")

# params accepted by each subcommand; anything else is rejected
_PARAMS: dict[str, frozenset[str]] = {
    "decompose": frozenset({"d", "poly"}),
    "gegenbauer": frozenset({"alpha", "degree", "at"}),
    "zonal-expand": frozenset({"alpha", "profile", "terms"}),
    "planewave": frozenset({"alpha", "r", "terms"}),
    "bessel": frozenset({"nu", "at"}),
    "verify-recurrence": frozenset({"alpha", "l", "s", "grid"}),
    "ft-sphere": frozenset({"poly", "at", "method"}),
    "hankel": frozenset({"nu", "profile", "at", "tol"}),
    "verify": frozenset({"suite", "seed", "grid", "list", "timing"}),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CommandConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.subcommand not in _PARAMS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        unknown = sorted(set(self.params) - _PARAMS[self.subcommand])
        if unknown:
            raise UsageError(f"{self.subcommand}: unknown parameter(s) {', '.join(unknown)}")
        if self.output_format not in FORMATS:
            raise UsageError(f"output format must be one of {', '.join(FORMATS)}")


# ---- argument helpers ------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def _vector(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from None


def _grid_item(text: str) -> tuple[str, list[str]]:
    key, sep, vals = text.partition("=")
    if not sep or not key or not vals:
        raise argparse.ArgumentTypeError(f"grid override must look like key=v1,v2, got {text!r}")
    return key.strip(), [v.strip() for v in vals.split(",")]


def _poly_text(arg: str) -> str:
    """Inline text, or the contents of a file when ``arg`` names one."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return " ".join(line.split("#", 1)[0].strip() for line in fh).strip()
    return arg


def _named_options(spec: str) -> tuple[str, dict[str, str]]:
    """``name:key=value,key=value`` -> ``(name, {key: value})``."""
    name, _, rest = spec.partition(":")
    opts = {}
    for item in filter(None, rest.split(",")):
        k, sep, v = item.partition("=")
        if not sep:
            raise UsageError(f"profile option must be key=value, got {item!r} in {spec!r}")
        opts[k.strip()] = v.strip()
    return name.strip(), opts


def _take(opts: dict, key: str, default: str | None = None) -> str:
    if key in opts:
        return opts.pop(key)
    if default is None:
        raise UsageError(f"missing profile option {key!r}")
    return default


def _no_leftovers(name: str, opts: dict) -> None:
    if opts:
        raise UsageError(f"profile {name!r} does not take option(s) {', '.join(sorted(opts))}")


def _zonal_profile(spec: str, alpha: Fraction) -> zonal.ZonalProfile:
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            return zonal.ZonalProfile.from_taylor_lines(fh.read().splitlines())
    name, opts = _named_options(spec)
    if name == "planewave":
        prof = zonal.ZonalProfile.plane_wave(float(_take(opts, "r", "1")))
    elif name == "monomial":
        prof = zonal.ZonalProfile.monomial(int(_take(opts, "l")))
    elif name == "constant":
        prof = zonal.ZonalProfile.constant(complex(_take(opts, "c", "1")))
    elif name == "generating":
        prof = zonal.ZonalProfile.generating(alpha, float(_take(opts, "r")))
    else:
        raise UsageError(
            f"unknown zonal profile {name!r}; builtins are planewave:r=, monomial:l=, constant:c=, "
            "generating:r=, or a path to a Taylor file"
        )
    _no_leftovers(name, opts)
    return prof


def _radial_profile(spec: str) -> transforms.RadialProfile:
    name, opts = _named_options(spec)
    if name == "gaussian":
        prof = transforms.RadialProfile.gaussian(float(_take(opts, "a", "1")))
    elif name == "bump":
        prof = transforms.RadialProfile.bump(float(_take(opts, "w", "1")))
    else:
        raise UsageError(f"unknown radial profile {name!r}; builtins are gaussian:a= and bump:w=")
    _no_leftovers(name, opts)
    return prof


# ---- output ----------------------------------------------------------------


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _g(x: float) -> str:
    return format(x, ".17g")


def _table(header: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        return _json([dict(zip(header, r)) for r in rows])
    cells = [[_g(v) if isinstance(v, float) else str(v) for v in r] for r in rows]
    if fmt == "csv":
        return "\n".join([",".join(header)] + [",".join(c) for c in cells]) + "\n"
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _mapping(obj: dict, fmt: str) -> str:
    if fmt == "json":
        return _json(obj)
    return _table(list(obj), [list(obj.values())], fmt)


# ---- commands --------------------------------------------------------------


def _cmd_decompose(p: dict, fmt: str) -> tuple[int, str]:
    d = p["d"]
    harmonic.alpha_for_dim(d)
    poly = polyalg.parse_polynomial(_poly_text(p["poly"]), d)
    dec = harmonic.decompose(poly)
    if fmt == "json":
        return 0, _json(dec.to_dict())
    rows = [(k, h.degree, h.to_text()) for k, h in dec.components]
    return 0, _table(["k", "degree", "h"], rows, fmt)


def _cmd_gegenbauer(p: dict, fmt: str) -> tuple[int, str]:
    a, l = p["alpha"], p["degree"]
    if a <= Fraction(-1, 2):
        raise UsageError(f"alpha must exceed -1/2, got {a}")
    if l < 0:
        raise UsageError(f"degree must be nonnegative, got {l}")
    if p.get("at") is not None:
        t = p["at"]
        return 0, _mapping({"alpha": str(a), "degree": l, "t": t, "value": gegenbauer_eval(a, l, t)}, fmt)
    g = gegenbauer_poly(a, l)
    rows = [(i, str(c)) for i, c in enumerate(g.coefficients)]
    if fmt == "json":
        return 0, _json({"alpha": str(a), "degree": l, "coefficients": [str(c) for c in g.coefficients]})
    return 0, _table(["power", "coefficient"], rows, fmt)


def _cmd_zonal_expand(p: dict, fmt: str) -> tuple[int, str]:
    a = harmonic.check_alpha(p["alpha"])
    if p["terms"] < 0:
        raise UsageError("--terms must be nonnegative")
    exp = zonal.expand(_zonal_profile(p["profile"], a), a, p["terms"])
    rows = [(r["m"], r["re"], r["im"], r["weight"]) for r in exp.to_rows()]
    return 0, _table(["m", "re", "im", "weight"], rows, fmt)


def _cmd_planewave(p: dict, fmt: str) -> tuple[int, str]:
    a = harmonic.check_alpha(p["alpha"])
    if p["terms"] < 0:
        raise UsageError("--terms must be nonnegative")
    coeffs = zonal.plane_wave_coefficients(a, p["r"], p["terms"])
    rows = [(m, c.real, c.imag) for m, c in enumerate(coeffs)]
    return 0, _table(["m", "re", "im"], rows, fmt)


def _cmd_bessel(p: dict, fmt: str) -> tuple[int, str]:
    nu, t = bessel.BesselOrder(p["nu"]), p["at"]
    out = {"nu": str(nu), "t": t, "J": bessel.bessel_j(nu, t), "j": bessel.spherical_j(nu, t)}
    return 0, _mapping(out, fmt)


def _cmd_verify_recurrence(p: dict, fmt: str) -> tuple[int, str]:
    a, l, s = p["alpha"], p["l"], p["s"]
    rows = []
    for r in p["grid"]:
        res_j = bessel.multistep_residual(a, l, s, r)
        res_J = bessel.multistep_residual_J(a, l, s, r) if r > 0 else 0.0
        rows.append((str(a), l, s, r, res_j, res_J))
    return 0, _table(["alpha", "l", "s", "r", "residual_j", "residual_J"], rows, fmt)


def _cmd_ft_sphere(p: dict, fmt: str) -> tuple[int, str]:
    x = p["at"]
    harmonic.alpha_for_dim(len(x))
    poly = polyalg.parse_polynomial(_poly_text(p["poly"]), len(x))
    method = {
        "components": transforms.sphere_ft_components,
        "laplacian": transforms.sphere_ft_laplacian,
        "oracle": transforms.sphere_ft_oracle,
    }[p["method"]]
    res = method(poly, x)
    out = res.to_dict()
    out["method"] = p["method"]
    return 0, _mapping(out, fmt)


def _cmd_hankel(p: dict, fmt: str) -> tuple[int, str]:
    prof = _radial_profile(p["profile"])
    res = transforms.hankel(prof, p["nu"], p["at"], tol=p["tol"])
    out = {
        "nu": str(res.order),
        "t": res.at,
        "value": res.value,
        "quadrature_error_estimate": res.quadrature_error_estimate,
    }
    return 0, _mapping(out, fmt)


def _cmd_verify(p: dict, fmt: str) -> tuple[int, str]:
    if p.get("list"):
        rows = suites.suite_listing()
        if fmt == "json":
            return 0, _json({name: anchor for name, anchor in rows})
        return 0, _table(["suite", "identity"], rows, fmt)
    if not p.get("suite"):
        raise UsageError("verify needs --suite NAME (or --list)")
    grid: dict[str, list[str]] = {}
    for key, vals in p.get("grid") or []:
        grid.setdefault(key, []).extend(vals)
    try:
        report = suites.run_verify_suite(p["suite"], p["seed"], grid)
    except suites.UnknownSuite:
        raise UsageError(f"unknown suite {p['suite']!r}; known: {', '.join(suites.SUITES)}") from None
    if fmt == "csv":
        text = report.to_csv()
    elif fmt == "pretty":
        text = report.to_pretty()
    else:
        text = report.to_json(timing=bool(p.get("timing")))
    print(
        f"{report.suite}: {report.passed}/{report.total} passed, max residual {report.max_residual:.3e}",
        file=sys.stderr,
    )
    return (0 if report.all_passed else 1), text


_COMMANDS = {
    "decompose": _cmd_decompose,
    "gegenbauer": _cmd_gegenbauer,
    "zonal-expand": _cmd_zonal_expand,
    "planewave": _cmd_planewave,
    "bessel": _cmd_bessel,
    "verify-recurrence": _cmd_verify_recurrence,
    "ft-sphere": _cmd_ft_sphere,
    "hankel": _cmd_hankel,
    "verify": _cmd_verify,
}


def run(config: CommandConfig) -> tuple[int, str]:
    """Execute ``config``; returns ``(exit_code, output_text)``.

    Usage and input errors come back as code 2 with the message as output.
    """
    try:
        return _COMMANDS[config.subcommand](dict(config.params), config.output_format)
    except (UsageError, polyalg.PolynomialParseError) as exc:
        return 2, f"error: {exc}\n"
    except transforms.HankelConvergenceError as exc:
        return 1, f"error: {exc}\n"
    except ArithmeticError as exc:
        return 1, f"error: {exc}\n"
    except ValueError as exc:
        return 2, f"error: {exc}\n"


# ---- argparse --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="output format")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="zonalharm", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    sp = sub.add_parser("decompose", parents=[common], help="canonical harmonic decomposition")
    sp.add_argument("--d", type=int, required=True, help="dimension (>= 3)")
    sp.add_argument("poly", help="polynomial text, e.g. '3/2*x1^2 - x2*x3', or a file holding it")

    sp = sub.add_parser("gegenbauer", parents=[common], help="Gegenbauer coefficients or a value")
    sp.add_argument("--alpha", type=_rational, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--at", type=float, default=None)

    sp = sub.add_parser("zonal-expand", parents=[common], help="zonal-function expansion coefficients")
    sp.add_argument("--alpha", type=_rational, required=True)
    sp.add_argument("--profile", required=True, help="planewave:r=2, monomial:l=3, constant:c=1, generating:r=0.5, or a Taylor file")
    sp.add_argument("--terms", type=int, required=True, help="largest m")

    sp = sub.add_parser("planewave", parents=[common], help="closed-form plane-wave coefficients")
    sp.add_argument("--alpha", type=_rational, required=True)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--terms", type=int, required=True)

    sp = sub.add_parser("bessel", parents=[common], help="J_nu and j_nu at a point")
    sp.add_argument("--nu", type=_rational, required=True)
    sp.add_argument("--at", type=float, required=True)

    sp = sub.add_parser("verify-recurrence", parents=[common], help="multi-step Bessel recurrence residuals")
    sp.add_argument("--alpha", type=_rational, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--grid", type=_vector, default=[0.5, 1.0, 2.0, 5.0, 10.0], help="comma-separated r values")

    sp = sub.add_parser("ft-sphere", parents=[common], help="Fourier transform of a polynomial density on the sphere")
    sp.add_argument("--poly", required=True, help="polynomial text or a file holding it")
    sp.add_argument("--at", type=_vector, required=True, help="x1,x2,...")
    sp.add_argument("--method", choices=("components", "laplacian", "oracle"), default="components")

    sp = sub.add_parser("hankel", parents=[common], help="Hankel transform of a radial profile")
    sp.add_argument("--nu", type=_rational, required=True)
    sp.add_argument("--profile", default="gaussian", help="gaussian[:a=1] or bump[:w=1]")
    sp.add_argument("--at", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    sp.add_argument("--suite", default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--grid", type=_grid_item, action="append", default=None, metavar="KEY=V1,V2", help="override a grid axis")
    sp.add_argument("--list", action="store_true", help="list suites and the identity each checks")
    sp.add_argument("--timing", action="store_true", help="include wall time in the JSON summary")
    return parser


def _default_format(sub: str, out: str | None) -> str:
    if out and out.endswith(".csv"):
        return "csv"
    if sub == "verify-recurrence":
        return "csv"
    return "json"


_NEGATIVE_RATIONAL = re.compile(r"^-\d+/\d+$")


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """``--nu -1/2`` -> ``--nu=-1/2``; argparse would read ``-1/2`` as a flag."""
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE_RATIONAL.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def config_from_args(argv: Sequence[str] | None = None) -> CommandConfig:
    argv = _join_negative_values(sys.argv[1:] if argv is None else argv)
    ns = vars(build_parser().parse_args(argv))
    sub = ns.pop("subcommand")
    out = ns.pop("out")
    fmt = ns.pop("format") or _default_format(sub, out)
    return CommandConfig(sub, ns, fmt, out)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = config_from_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    code, text = run(config)
    if text.startswith("error: "):
        sys.stderr.write(text)
        return code
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
