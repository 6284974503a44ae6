"""Verification suites: each drives one identity over a seeded case grid.

A suite builds its case list up front from ``numpy.random.Generator(PCG64(seed))``
so the list, and therefore the report, depends only on the seed and the grid
overrides.  Cases run on a thread pool capped by ``ZH_THREADS``.
"""
from __future__ import annotations

import cmath
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import bessel, harmonic, polyalg, transforms, zonal
from .gegenbauer import generating_function_residuals
from .polyalg import HomogeneousPolynomial

__all__ = [
    "CaseResult",
    "VerificationReport",
    "SUITES",
    "UnknownSuite",
    "random_polynomial",
    "run_verify_suite",
    "suite_listing",
]

CSV_HEADER = "suite,case_id,param_json,residual,tolerance,pass"


class UnknownSuite(KeyError):
    pass


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    params: dict
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "params": self.params,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    suite: str
    seed: int
    cases: list[CaseResult]
    wall_time_s: float = field(default=0.0, compare=False)
    generator: str = "PCG64"

    @property
    def total(self) -> int:
        return len(self.cases)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.total

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.cases), default=0.0)

    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.passed]

    def summary(self, timing: bool = False) -> dict:
        return {
            "total": self.total,
            "passed": self.passed,
            "max_residual": self.max_residual,
            # wall time would break byte-identical output, so it is opt-in
            "wall_time_s": self.wall_time_s if timing else None,
        }

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "generator": self.generator,
            "summary": self.summary(timing),
            "cases": [c.to_dict() for c in self.cases],
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for c in self.cases:
            params = json.dumps(c.params, sort_keys=True, separators=(",", ":"))
            params = '"' + params.replace('"', '""') + '"'
            lines.append(
                f"{self.suite},{c.case_id},{params},{c.residual:.17g},{c.tolerance:.17g},{str(c.passed).lower()}"
            )
        return "\n".join(lines) + "\n"

    def to_pretty(self) -> str:
        s = self.summary()
        out = [
            f"suite {self.suite} (seed {self.seed}): {s['passed']}/{s['total']} passed, "
            f"max residual {s['max_residual']:.3e}"
        ]
        for c in self.failures():
            out.append(f"  FAIL {c.case_id} residual={c.residual:.3e} tol={c.tolerance:.1e} {json.dumps(c.params)}")
        return "\n".join(out) + "\n"


# ---- grid helpers ----------------------------------------------------------


class _Grid:
    """Read suite parameters from overrides, falling back to defaults."""

    def __init__(self, overrides: Mapping[str, Sequence[str]] | None, allowed: Sequence[str]):
        self.raw = dict(overrides or {})
        unknown = sorted(set(self.raw) - set(allowed))
        if unknown:
            raise ValueError(f"unknown grid key(s) {', '.join(unknown)}; this suite accepts {', '.join(allowed)}")

    def values(self, key: str, default: Sequence, cast: Callable = float) -> list:
        if key not in self.raw:
            return list(default)
        try:
            return [cast(v) for v in self.raw[key]]
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad value for grid key {key!r}: {exc}") from None

    def value(self, key: str, default, cast: Callable = int):
        vals = self.values(key, [default], cast)
        if len(vals) != 1:
            raise ValueError(f"grid key {key!r} takes a single value")
        return vals[0]


def _frac(v) -> Fraction:
    return Fraction(str(v))


def _fmt(v) -> str | float | int:
    """JSON-friendly parameter value; rationals become ``"p/q"`` strings."""
    if isinstance(v, Fraction):
        return str(v)
    return v


Case = tuple[dict, Callable[[], tuple[float, dict]], float]


def random_polynomial(rng: np.random.Generator, dim: int, degree: int, max_terms: int = 6) -> HomogeneousPolynomial:
    """Sparse random polynomial; coefficients ``n/q`` with ``n`` in ``{-9..9}\\{0}``, ``q`` in ``1..4``."""
    monos = list(harmonic._monomials(dim, degree))
    count = int(rng.integers(1, min(max_terms, len(monos)) + 1))
    picks = rng.choice(len(monos), size=count, replace=False)
    terms = {}
    for i in sorted(int(p) for p in picks):
        num = int(rng.integers(1, 10)) * (1 if rng.integers(0, 2) else -1)
        terms[monos[i]] = Fraction(num, int(rng.integers(1, 5)))
    return HomogeneousPolynomial(dim, degree, terms)


def _random_point(rng: np.random.Generator, dim: int, max_norm: float) -> list[float]:
    v = rng.standard_normal(dim)
    v *= rng.uniform(0.0, max_norm) / float(np.linalg.norm(v))
    return [float(c) for c in v]


def _random_unit(rng: np.random.Generator, dim: int) -> polyalg.UnitVector:
    return polyalg.UnitVector.normalize(rng.standard_normal(dim))


def _max_abs_coef(p: HomogeneousPolynomial) -> Fraction:
    return max((abs(c) for c in p.terms.values()), default=Fraction(0))


# ---- suites ----------------------------------------------------------------


def _theorem1(rng, grid: _Grid) -> list[Case]:
    n = grid.value("n", 50)
    dims = grid.values("d", range(3, 7), int)
    degrees = grid.values("l", range(0, 9), int)
    cases = []
    for _ in range(n):
        d = int(rng.choice(dims))
        l = int(rng.choice(degrees))
        p = random_polynomial(rng, d, l)

        def run(p=p):
            dec = harmonic.decompose(p)
            worst = Fraction(0)
            for _, h in dec.components:
                worst = max(worst, _max_abs_coef(polyalg.laplacian(h)))
            worst = max(worst, _max_abs_coef(dec.reconstruct() - p))
            projs = [dec.projection(k) for k, _ in dec.components]
            for i in range(len(projs)):
                for j in range(i + 1, len(projs)):
                    worst = max(worst, abs(polyalg.sphere_inner_product(projs[i], projs[j])))
            return float(worst), {}

        cases.append(({"d": d, "l": l, "poly": p.to_text()}, run, 0.0))
    return cases


def _dimension(rng, grid: _Grid) -> list[Case]:
    cases = []
    for d in grid.values("d", range(3, 6), int):
        for l in grid.values("l", range(0, 7), int):
            def run(d=d, l=l):
                formula = harmonic.harmonic_dim(harmonic.alpha_for_dim(d), l)
                kernel = harmonic.laplacian_kernel_dim(d, l)
                return float(abs(formula - kernel)), {"formula": formula, "kernel": kernel}

            cases.append(({"d": d, "l": l}, run, 0.0))
    return cases


def _theorem2(rng, grid: _Grid) -> list[Case]:
    alphas = grid.values("alpha", ["1/2", "1"], _frac)
    r = grid.value("r", 2.0, float)
    m_max = grid.value("m", 8)
    m_closed = grid.value("m_closed", 40)
    l_max = grid.value("l", 6)
    rtol = grid.value("rtol", 1e-8, float)
    closed_tol = grid.value("closed_tol", 1e-12, float)
    cases: list[Case] = []
    for a in alphas:
        profiles = [("planewave", r, zonal.ZonalProfile.plane_wave(r))]
        profiles += [("monomial", l, zonal.ZonalProfile.monomial(l)) for l in range(l_max + 1)]
        for kind, param, prof in profiles:
            top = m_max if kind == "planewave" else int(param)
            for m in range(top + 1):
                if kind == "monomial" and (int(param) - m) % 2:
                    continue

                def run(a=a, prof=prof, m=m, top=top):
                    got = zonal.expand(prof, a, top).series_coefficients()[m]
                    ref = zonal.gegenbauer_integral_coefficient(prof, a, m)
                    return abs(got - ref) / abs(ref), {}

                cases.append(
                    ({"check": "integral", "alpha": str(a), "profile": kind, "param": param, "m": m}, run, rtol)
                )

        def run_closed(a=a):
            got = zonal.expand(zonal.ZonalProfile.plane_wave(r), a, m_closed).series_coefficients()
            ref = zonal.plane_wave_coefficients(a, r, m_closed)
            scale = max(abs(c) for c in ref)
            return max(abs(g - c) for g, c in zip(got, ref)) / scale, {}

        cases.append(
            ({"check": "closed-form", "alpha": str(a), "profile": "planewave", "param": r, "M": m_closed}, run_closed, closed_tol)
        )
    return cases


def _corollary1(rng, grid: _Grid) -> list[Case]:
    M = grid.value("M", 50)
    points = grid.value("points", 100)
    tol = grid.value("tol", 1e-10, float)
    cases = []
    for d in grid.values("d", [3, 4], int):
        a = harmonic.alpha_for_dim(d)
        for r in grid.values("r", [1.0, 5.0]):
            pairs = [(_random_unit(rng, d), _random_unit(rng, d)) for _ in range(points)]

            def run(a=a, r=r, pairs=pairs):
                coeffs = zonal.plane_wave_coefficients(a, r, M)
                worst = 0.0
                for eta, xi in pairs:
                    t = eta.dot(xi)
                    z = zonal._kernel_values(a, M, t)
                    partial = complex(
                        math.fsum(c.real * v for c, v in zip(coeffs, z)),
                        math.fsum(c.imag * v for c, v in zip(coeffs, z)),
                    )
                    worst = max(worst, abs(partial - cmath.exp(1j * r * t)))
                return worst, {}

            cases.append(({"d": d, "r": r, "M": M, "points": points}, run, tol))
    return cases


def _theorem3(rng, grid: _Grid) -> list[Case]:
    n = grid.value("n", 100)
    dims = grid.values("d", [3, 4, 5], int)
    degrees = grid.values("l", range(0, 7), int)
    max_norm = grid.value("xmax", 5.0, float)
    tol_eq = grid.value("tol", 1e-11, float)
    tol_oracle = grid.value("oracle_tol", 1e-10, float)
    cases: list[Case] = []
    for _ in range(n):
        d = int(rng.choice(dims))
        l = int(rng.choice(degrees))
        p = random_polynomial(rng, d, l)
        x = _random_point(rng, d, max_norm)
        params = {"d": d, "l": l, "poly": p.to_text(), "x": x}
        memo: dict = {}

        def both(p=p, x=x, memo=memo):
            if not memo:
                memo["c"] = transforms.sphere_ft_components(p, x).value
                memo["l"] = transforms.sphere_ft_laplacian(p, x).value
            return memo["c"], memo["l"]

        def run_eq(both=both):
            c, lap = both()
            return abs(c - lap), {}

        def run_oracle(both=both, p=p, x=x):
            c, lap = both()
            ref = transforms.sphere_ft_oracle(p, x).value
            return max(abs(c - ref), abs(lap - ref)), {}

        cases.append(({**params, "check": "components-vs-laplacian"}, run_eq, tol_eq))
        cases.append(({**params, "check": "oracle"}, run_oracle, tol_oracle))
    return cases


def _corollary3(rng, grid: _Grid) -> list[Case]:
    alphas = grid.values("alpha", ["1/2", "1", "3/2", "2"], _frac)
    degrees = grid.values("l", range(2, 11), int)
    radii = grid.values("r", [0.5, 1.0, 2.0, 5.0, 10.0])
    tol = grid.value("tol", 1e-11, float)
    cases: list[Case] = []
    for a in alphas:
        for l in degrees:
            for s in range(1, l // 2 + 1):
                def run_unit(a=a, l=l, s=s):
                    return float(abs(bessel.multistep_coefficient(a, l, s, s) - 1)), {}

                cases.append(({"form": "k=s coefficient", "alpha": str(a), "l": l, "s": s}, run_unit, 0.0))
                for r in radii:
                    def run_j(a=a, l=l, s=s, r=r):
                        return bessel.multistep_residual(a, l, s, r), {}

                    def run_J(a=a, l=l, s=s, r=r):
                        return bessel.multistep_residual_J(a, l, s, r), {}

                    base = {"alpha": str(a), "l": l, "s": s, "r": r}
                    cases.append(({**base, "form": "j"}, run_j, tol))
                    cases.append(({**base, "form": "J"}, run_J, tol))
    return cases


def _corollary4(rng, grid: _Grid) -> list[Case]:
    cases: list[Case] = []
    tol_int = grid.value("tol_int", 1e-12, float)
    tol_half = grid.value("tol_half", 1e-11, float)
    for n in grid.values("n_int", range(0, 9), int):
        for t in grid.values("t_int", [0.5, 1.0, 2.0, 5.0]):
            cases.append(
                ({"form": "integer", "n": n, "t": t}, lambda n=n, t=t: (bessel.finite_expansion_integer_residual(n, t), {}), tol_int)
            )
    for n in grid.values("n_half", range(0, 7), int):
        for t in grid.values("t_half", [0.5, 1.0, 2.0, 5.0, 10.0]):
            cases.append(
                ({"form": "half-odd", "n": n, "t": t}, lambda n=n, t=t: (bessel.finite_expansion_halfodd_residual(n, t), {}), tol_half)
            )
    return cases


def _bochner(rng, grid: _Grid) -> list[Case]:
    points = grid.value("points", 5)
    tol = grid.value("tol", 1e-8, float)
    ymax = grid.value("ymax", 2.0, float)
    f = transforms.RadialProfile.gaussian(0.5)
    cases: list[Case] = []
    for d in grid.values("d", [3, 4], int):
        for _ in range(points):
            l = int(rng.integers(1, 5))
            h = harmonic.decompose(random_polynomial(rng, d, l)).component(0)
            y = _random_point(rng, d, ymax)
            q = random_polynomial(rng, d, 4)
            y2 = _random_point(rng, d, ymax)

            def closed(h=h, y=y):
                r2 = math.fsum(v * v for v in y)
                return transforms._i_power(h.degree) * math.exp(-r2 / 2) * polyalg.evaluate(h, y)

            def run_c(h=h, y=y, closed=closed):
                return abs(transforms.bochner_components(f, h, y) - closed()), {}

            def run_l(h=h, y=y, closed=closed):
                return abs(transforms.bochner_laplacian(f, h, y) - closed()), {}

            def run_pair(q=q, y=y2):
                return abs(transforms.bochner_components(f, q, y) - transforms.bochner_laplacian(f, q, y)), {}

            hp = {"d": d, "l": h.degree, "poly": h.to_text(), "y": y}
            cases.append(({**hp, "check": "components-vs-closed-form"}, run_c, tol))
            cases.append(({**hp, "check": "laplacian-vs-closed-form"}, run_l, tol))
            cases.append(
                ({"d": d, "l": 4, "poly": q.to_text(), "y": y2, "check": "components-vs-laplacian"}, run_pair, tol)
            )
        if d <= 4:
            q = random_polynomial(rng, d, 2)
            y = _random_point(rng, d, ymax / 2)

            def run_gh(q=q, y=y):
                return abs(transforms.bochner_components(f, q, y) - transforms.fourier_gauss_hermite(q, y)), {}

            cases.append(({"d": d, "l": 2, "poly": q.to_text(), "y": y, "check": "components-vs-gauss-hermite"}, run_gh, tol))
    return cases


def _periodicity(rng, grid: _Grid) -> list[Case]:
    alphas = grid.values("alpha", ["1/2", "1", "3/2"], _frac)
    degrees = grid.values("l", range(2, 7), int)
    ts = grid.values("t", [0.5, 1.0, 2.0])
    forms = grid.values("form", ["printed", "t_squared"], str)
    for form in forms:
        if form not in ("printed", "t_squared"):
            raise ValueError(f"unknown periodicity form {form!r}")
    tol = grid.value("tol", 1e-7, float)
    closed_tol = grid.value("closed_tol", 1e-9, float)
    phi = transforms.RadialProfile.gaussian(1.0)
    cases: list[Case] = []
    for form in forms:
        for a in alphas:
            for l in degrees:
                for t in ts:
                    def run(a=a, l=l, t=t, form=form):
                        return transforms.hankel_periodicity_residual(phi, a, l, t, t_squared=form == "t_squared"), {}

                    cases.append(({"form": form, "alpha": str(a), "l": l, "t": t}, run, tol))
    for nu in grid.values("nu", ["1/2", "1", "3/2", "2", "5/2"], _frac):
        for t in grid.values("t_closed", [0.0, 0.5, 1.0, 2.0, 4.0]):
            def run_closed(nu=nu, t=t):
                return abs(transforms.hankel(phi, nu, t).value - transforms.gaussian_hankel(nu, t)), {}

            cases.append(({"form": "gaussian-closed-form", "nu": str(nu), "t": t}, run_closed, closed_tol))
    return cases


def _genfunc(rng, grid: _Grid) -> list[Case]:
    r = grid.value("r", 0.5, float)
    M = grid.value("M", 60)
    tol = grid.value("tol", 1e-12, float)
    cases: list[Case] = []
    for a in grid.values("alpha", ["1/2", "1"], _frac):
        for t in grid.values("t", [-0.9, 0.0, 0.9]):
            def run(a=a, t=t):
                res = generating_function_residuals(a, r, t, M)
                decay = {str(m): res[m] for m in range(0, M + 1, 10)}
                # observed per-term contraction over the stretch above the rounding floor
                usable = [m for m in range(M + 1) if res[m] > 1e-13]
                rate = (res[usable[-1]] / res[usable[0]]) ** (1.0 / (usable[-1] - usable[0])) if len(usable) > 1 else 0.0
                return res[-1], {"decay": decay, "rate": rate}

            cases.append(({"alpha": str(a), "r": r, "t": t, "M": M}, run, tol))
    return cases


@dataclass(frozen=True)
class _Suite:
    builder: Callable
    keys: tuple[str, ...]
    anchor: str


SUITES: dict[str, _Suite] = {
    "theorem1": _Suite(_theorem1, ("n", "d", "l"), "canonical harmonic decomposition: exact harmonicity, reconstruction, orthogonality"),
    "dimension": _Suite(_dimension, ("d", "l"), "dimension of degree-l harmonics vs exact rank of the Laplacian"),
    "theorem2": _Suite(
        _theorem2,
        ("alpha", "r", "m", "m_closed", "l", "rtol", "closed_tol"),
        "zonal-function expansion coefficients vs the Gegenbauer integral",
    ),
    "corollary1": _Suite(_corollary1, ("d", "r", "M", "points", "tol"), "plane-wave expansion in zonal harmonics"),
    "theorem3": _Suite(
        _theorem3,
        ("n", "d", "l", "xmax", "tol", "oracle_tol"),
        "Fourier transform of a polynomial density on the sphere, both formulas vs Taylor oracle",
    ),
    "corollary3": _Suite(_corollary3, ("alpha", "l", "r", "tol"), "multi-step Bessel recurrence, j and J forms"),
    "corollary4": _Suite(
        _corollary4,
        ("n_int", "t_int", "n_half", "t_half", "tol_int", "tol_half"),
        "finite Bessel expansions: integer orders and half-odd closed form",
    ),
    "bochner": _Suite(_bochner, ("d", "points", "ymax", "tol"), "generalized Bochner identity, both displays"),
    "periodicity": _Suite(
        _periodicity,
        ("alpha", "l", "t", "form", "tol", "nu", "t_closed", "closed_tol"),
        "three-order Hankel transform relation, plus the Gaussian closed form",
    ),
    "genfunc": _Suite(_genfunc, ("alpha", "r", "t", "M", "tol"), "Gegenbauer generating function partial sums"),
}


def suite_listing() -> list[tuple[str, str]]:
    return [(name, s.anchor) for name, s in SUITES.items()]


def _threads() -> int:
    raw = os.environ.get("ZH_THREADS", "")
    try:
        n = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise ValueError(f"ZH_THREADS must be a positive integer, got {raw!r}") from None
    return max(1, n)


def run_verify_suite(name: str, seed: int = 0, grid: Mapping[str, Sequence[str]] | None = None) -> VerificationReport:
    if name not in SUITES:
        raise UnknownSuite(name)
    suite = SUITES[name]
    rng = np.random.Generator(np.random.PCG64(seed))
    specs = suite.builder(rng, _Grid(grid, suite.keys))
    width = max(4, len(str(len(specs))))
    start = time.perf_counter()

    def execute(indexed):
        i, (params, fn, tol) = indexed
        residual, extra = fn()
        residual = float(residual)
        if math.isnan(residual):
            residual = math.inf
        merged = {k: _fmt(v) for k, v in params.items()}
        merged.update(extra)
        return CaseResult(f"{name}-{i:0{width}d}", merged, residual, float(tol))

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(execute, enumerate(specs)))
    results.sort(key=lambda c: c.case_id)
    return VerificationReport(name, seed, results, time.perf_counter() - start)
