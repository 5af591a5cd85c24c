"""Command-line front end.

Every subcommand prints one JSON document on standard output.  ``check``
runs the verification suites and exits 0 when all pass, 1 otherwise; bad
arguments exit 2 before any report is produced.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import domains, embedding, hartogs, integration, quantization
from .errors import HartogsError, ParameterError
from .hartogs import CartanHartogsParams, HartogsPoint, PointPair
from .reports import CheckReport, SamplerConfig, block_rng, dumps

SUBCOMMANDS = ("info", "epsilon", "expansion", "diastasis", "embed", "pullback", "integrate", "check")

TOLERANCES = {
    "condition_A": 1e-12,
    "leading_identities": 1e-9,
    "B_crosscheck": 1e-10,
    "limite": 1e-9,
    "kahler_einstein": 1e-4,
    "scalar_curvature_remark": 1e-3,
    "det_identity": 1e-5,
    "pullback": 1e-6,
    "integral_sigma": 3.0,
    "generic_norm_symmetry": 1e-13,
}


@dataclass
class SuiteConfig:
    domain: str
    mu: Fraction | float
    alphas: list
    n_samples: int = 10_000
    seed: int = 42
    step: float = 1e-4
    order: int | None = None
    mc_samples: int = 1_000_000
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    dump_samples: str | None = None

    def __post_init__(self):
        self.params = hartogs.make_params(self.domain, self.mu)
        d = self.params.d
        if not self.alphas:
            raise ParameterError("at least one alpha is required")
        for a in self.alphas:
            if not a > d + 1:
                raise ParameterError(f"alpha={a} must exceed d+1 = {d + 1}")
        unknown = set(self.tolerances) - set(TOLERANCES)
        if unknown:
            raise ParameterError(f"unknown tolerance names: {sorted(unknown)}")

    def tol(self, name):
        return self.tolerances.get(name, TOLERANCES[name])


# ---------------------------------------------------------------------------
# suites


def _domain_identities(cfg: SuiteConfig) -> CheckReport:
    spec = cfg.params.base
    tol = cfg.tol("generic_norm_symmetry")
    rng = block_rng(cfg.seed, 900_000)
    z = domains.sample_base(spec, 1000, rng)
    zeta = domains.sample_base(spec, 1000, rng)
    asym = float(np.max(np.abs(domains.generic_norm(spec, z, zeta)
                               - np.conj(domains.generic_norm(spec, zeta, z)))))
    dim_ok = spec.d == spec.r * (spec.r - 1) * spec.a // 2 + spec.r * spec.b + spec.r
    genus_ok = spec.genus == (spec.r - 1) * spec.a + spec.b + 2
    origin = np.zeros(spec.d)
    kernel_ok = abs(complex(domains.bergman_kernel(spec, origin, origin)) * spec.volume - 1) <= 2 * np.finfo(float).eps
    return CheckReport("domain_identities", spec.as_dict(), asym, tol,
                       dim_ok and genus_ok and kernel_ok and asym < tol, 1000, cfg.seed,
                       {"dimension_identity": dim_ok, "genus_identity": genus_ok,
                        "kernel_normalization": kernel_ok})


def _condition_a(cfg: SuiteConfig) -> CheckReport:
    sampler = SamplerConfig(n_samples=cfg.n_samples, seed=cfg.seed)
    report = hartogs.exp_minus_diastasis_report(cfg.params, sampler, tol=cfg.tol("condition_A"))
    if cfg.dump_samples:
        pairs = hartogs.sample_pairs(cfg.params, sampler)
        dist = hartogs.diastasis(cfg.params, pairs)
        _dump_pairs(cfg.dump_samples, pairs, dist)
    return report


def _dump_pairs(path, pairs, dist):
    xs, ys = pairs.x.coords, pairs.y.coords
    n = xs.shape[1]
    header = ([f"x{i}_{part}" for i in range(n) for part in ("re", "im")]
              + [f"y{i}_{part}" for i in range(n) for part in ("re", "im")] + ["D", "exp_minus_D"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for x, y, dv in zip(xs, ys, dist):
            row = [v for c in x for v in (repr(c.real), repr(c.imag))]
            row += [v for c in y for v in (repr(c.real), repr(c.imag))]
            writer.writerow(row + [repr(float(dv)), repr(math.exp(-dv))])


def _integer_alphas(cfg: SuiteConfig) -> list[int]:
    d = cfg.params.d
    ints = sorted({int(a) for a in cfg.alphas if float(a).is_integer()})
    nxt = max(ints + [d + 1]) + 1
    while len(ints) < d + 3:
        ints.append(nxt)
        nxt += 1
    return ints


def _epsilon_positive(cfg: SuiteConfig) -> CheckReport:
    params = cfg.params
    rng = block_rng(cfg.seed, 900_001)
    pts = hartogs.sample_points(params, 1000, rng, stress_fraction=0.25)
    pair = PointPair(pts, pts)
    worst_min, worst_imag = math.inf, 0.0
    for a in cfg.alphas:
        eps = quantization.epsilon_eval(params, float(a), pair)
        worst_min = min(worst_min, float(np.min(eps.real)))
        worst_imag = max(worst_imag, float(np.max(np.abs(eps.imag) / np.abs(eps))))
    return CheckReport("epsilon_diagonal_positive", params.as_dict(), worst_min, 0.0,
                       worst_min > 0 and worst_imag < 1e-10, 1000, cfg.seed,
                       {"max_rel_imag": worst_imag, "alphas": [float(a) for a in cfg.alphas]})


def _fd_points(cfg: SuiteConfig, n=10):
    rng = block_rng(cfg.seed, 900_002)
    pts = hartogs.sample_points(cfg.params, n, rng, rmax=0.7, wmax=0.7)
    return [pts[i] for i in range(n)]


def _pullback(cfg: SuiteConfig) -> CheckReport:
    params = cfg.params
    d = params.d
    order = cfg.order or (40 if d <= 2 else 12)
    alpha = float(cfg.alphas[0])
    rng = block_rng(cfg.seed, 900_003)
    tol = cfg.tol("pullback")
    worst, monotone = 0.0, True
    n = 20
    for _ in range(n):
        x = _small_point(params, rng)
        y = _small_point(params, rng)
        pair = PointPair(x, y)
        coarse = embedding.pullback_residual(params, alpha, pair, order // 2)
        fine = embedding.pullback_residual(params, alpha, pair, order)
        worst = max(worst, fine)
        monotone &= fine <= coarse or max(fine, coarse) < 1e-13
    return CheckReport("pullback", {**params.as_dict(), "alpha": alpha, "order": order}, worst, tol,
                       worst < tol and monotone, n, cfg.seed, {"monotone_in_order": monotone})


def _small_point(params, rng, radius=0.5):
    d = params.d
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    z *= radius * rng.random() / np.linalg.norm(z)
    w = radius * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    return HartogsPoint(z, w)


def _integrals(cfg: SuiteConfig) -> CheckReport:
    params = cfg.params
    sigma = cfg.tol("integral_sigma")
    rows = []
    passed = True
    for a in cfg.alphas:
        est = integration.weighted_norm_integral_mc(params, float(a), cfg.mc_samples, cfg.seed)
        exact = integration.weighted_norm_integral_closed(params, float(a))
        z = abs(est.value - exact) / est.stderr
        passed &= z < sigma
        rows.append({"alpha": float(a), "mc": est.value, "stderr": est.stderr, "closed": exact, "z": z})
    try:
        integration.weighted_norm_integral_closed(params, params.d + 1)
        guard = False
    except integration.DivergenceError:
        guard = True
    worst = max(r["z"] for r in rows)
    return CheckReport("weighted_integral", params.as_dict(), worst, sigma, passed and guard,
                       cfg.mc_samples, cfg.seed, {"rows": rows, "divergence_guard": guard})


SUITES = ("domain", "condition_A", "leading", "bcheck", "bprime", "epsilon", "ke", "remark",
          "det", "pullback", "integral")


def run_suite(cfg: SuiteConfig, only=None) -> tuple[list[CheckReport], int]:
    """Run every applicable suite in order; exit status 0 iff all pass.

    ``only`` restricts the run to one name from :data:`SUITES`.
    """
    params = cfg.params
    ball = params.base.is_ball and params.d <= 3
    cache = {}

    def points():
        if "pts" not in cache:
            cache["pts"] = _fd_points(cfg)
        return cache["pts"]

    plan = [
        ("domain", True, lambda: _domain_identities(cfg)),
        ("condition_A", True, lambda: _condition_a(cfg)),
        ("leading", True, lambda: quantization.leading_identities(params, tol=cfg.tol("leading_identities"))),
        ("bcheck", True, lambda: quantization.b_crosscheck_report(
            params, SamplerConfig(n_samples=1000, seed=cfg.seed), tol=cfg.tol("B_crosscheck"))),
        ("bprime", True, lambda: quantization.condition_bprime_report(
            params, _integer_alphas(cfg), SamplerConfig(n_samples=cfg.n_samples, seed=cfg.seed),
            limite_tol=cfg.tol("limite"))),
        ("epsilon", True, lambda: _epsilon_positive(cfg)),
        ("ke", math.isclose(float(params.mu), params.mu0, rel_tol=1e-12),
         lambda: hartogs.kahler_einstein_report(params, points(), cfg.step, tol=cfg.tol("kahler_einstein"))),
        ("remark", True, lambda: quantization.scalar_curvature_remark_report(
            params, points(), cfg.step, tol=cfg.tol("scalar_curvature_remark"))),
        ("det", True, lambda: hartogs.det_identity_residual(params, points(), cfg.step,
                                                            tol=cfg.tol("det_identity"))),
        ("pullback", ball, lambda: _pullback(cfg)),
        ("integral", ball, lambda: _integrals(cfg)),
    ]
    reports = [run() for name, applies, run in plan if applies and (only is None or name == only)]
    status = 0 if all(r.passed for r in reports) else 1
    return reports, status


# ---------------------------------------------------------------------------
# argument parsing


def _parse_mu(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad mu {text!r}") from exc


def _parse_alphas(text):
    try:
        vals = [Fraction(v) for v in text.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from exc
    return [int(v) if v.denominator == 1 else float(v) for v in vals]


def _parse_tol(text):
    name, sep, value = text.partition("=")
    try:
        if not sep:
            raise ValueError
        return name.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--tol expects name=value, got {text!r}") from exc


def _json_arg(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hartogs-quant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    info = sub.add_parser("info", help="invariants of a base domain")
    info.add_argument("domain")

    def common(p, alpha=False, alpha_list=False):
        p.add_argument("--domain", required=True, help='"I:m,n" | "II:n" | "III:n" | "IV:n"')
        p.add_argument("--mu", required=True, type=_parse_mu)
        if alpha:
            p.add_argument("--alpha", required=True, type=float)
        if alpha_list:
            p.add_argument("--alpha", required=True, type=_parse_alphas, help="comma-separated list")

    def points(p, pair=False):
        p.add_argument("--point", action="append", type=_json_arg, default=[],
                       help="JSON array of [re, im] pairs: base coordinates then w")
        p.add_argument("--origin", action="store_true", help="use the origin")
        if pair:
            p.add_argument("--pair", type=_json_arg, help="JSON array of two points")

    eps = sub.add_parser("epsilon", help="epsilon-function at a point or pair")
    common(eps, alpha=True)
    points(eps, pair=True)

    exp = sub.add_parser("expansion", help="coefficients of epsilon as a polynomial in alpha")
    common(exp)
    points(exp, pair=True)

    dia = sub.add_parser("diastasis", help="Calabi diastasis of a pair")
    common(dia)
    points(dia, pair=True)

    emb = sub.add_parser("embed", help="truncated projective embedding (ball bases)")
    common(emb, alpha=True)
    emb.add_argument("--order", type=int, default=40)
    points(emb)

    pull = sub.add_parser("pullback", help="|D_FS(f(x), f(y)) - alpha D(x, y)| (ball bases)")
    common(pull, alpha=True)
    pull.add_argument("--order", type=int, default=40)
    points(pull, pair=True)

    integ = sub.add_parser("integrate", help="weighted norm of the constant function")
    common(integ, alpha=True)
    integ.add_argument("--samples", type=int, default=1_000_000)
    integ.add_argument("--seed", type=int, default=42)
    integ.add_argument("--shards", type=int, default=1)
    integ.add_argument("--closed-form", action="store_true")

    chk = sub.add_parser("check", help="run the verification suites")
    chk.add_argument("suite", nargs="?", choices=SUITES, help="run a single suite")
    common(chk, alpha_list=True)
    chk.add_argument("--samples", type=int, default=10_000)
    chk.add_argument("--mc-samples", type=int, default=1_000_000)
    chk.add_argument("--seed", type=int, default=42)
    chk.add_argument("--step", type=float, default=1e-4)
    chk.add_argument("--order", type=int)
    chk.add_argument("--tol", action="append", type=_parse_tol, default=[])
    chk.add_argument("--out")
    chk.add_argument("--dump-samples")
    return parser


def _points(params, args, count):
    if getattr(args, "pair", None) is not None:
        raw = args.pair
        if not isinstance(raw, list) or len(raw) != 2:
            raise ParameterError("--pair expects a JSON array of two points")
    elif args.origin:
        raw = [None] * (1 if count == 1 else 2)
    else:
        raw = list(args.point)
    if not raw:
        raise ParameterError("give --point, --pair or --origin")
    pts = [HartogsPoint.origin(params) if r is None else hartogs.point_from_json(params, r) for r in raw]
    for p in pts:
        if not bool(hartogs.hartogs_contains(params, p)):
            raise ParameterError("points must lie inside the Hartogs domain")
    if count == 1:
        if len(pts) != 1:
            raise ParameterError("exactly one point expected")
        return pts[0]
    if len(pts) == 1:
        pts = pts * 2
    if len(pts) != 2:
        raise ParameterError("one or two points expected")
    return PointPair(*pts)


def _params_out(params, **extra):
    return {**params.as_dict(), **{k: v for k, v in extra.items() if v is not None}}


def eval_command(args) -> dict:
    """Evaluate a non-suite subcommand and return its JSON document."""
    cmd = args.command
    if cmd == "info":
        return {"command": "info", **domains.parse_domain(args.domain).as_dict()}
    params = hartogs.make_params(args.domain, args.mu)
    if cmd == "epsilon":
        pair = _points(params, args, 2)
        value = complex(quantization.epsilon_eval(params, args.alpha, pair))
        return {"command": cmd, "params": _params_out(params, alpha=args.alpha),
                "x": hartogs.point_to_json(pair.x), "y": hartogs.point_to_json(pair.y),
                "value": value.real if value.imag == 0 else value}
    if cmd == "expansion":
        pair = _points(params, args, 2)
        poly = quantization.epsilon_alpha_polynomial(params, pair)
        diagonal = np.array_equal(pair.x.coords, pair.y.coords)
        # on the diagonal X is real; drop the roundoff imaginary part
        coeffs = [c.real if diagonal or c.imag == 0 else c for c in np.ravel(poly.coeffs).tolist()]
        return {"command": cmd, "params": _params_out(params), "coeffs": coeffs,
                "B": coeffs[1], "x": hartogs.point_to_json(pair.x), "y": hartogs.point_to_json(pair.y)}
    if cmd == "diastasis":
        pair = _points(params, args, 2)
        return {"command": cmd, "params": _params_out(params),
                "value": float(hartogs.diastasis(params, pair))}
    if cmd == "embed":
        p = _points(params, args, 1)
        vec = embedding.embed_truncated(params, args.alpha, p, args.order)
        return {"command": cmd, "params": _params_out(params, alpha=args.alpha, order=args.order),
                "components": vec.components, "index": [[m, list(q)] for m, q in vec.index],
                "squared_norm": vec.squared_norm, "tail_bound": vec.tail_bound}
    if cmd == "pullback":
        pair = _points(params, args, 2)
        res = embedding.pullback_residual(params, args.alpha, pair, args.order)
        return {"command": cmd, "params": _params_out(params, alpha=args.alpha, order=args.order),
                "value": res}
    if cmd == "integrate":
        out = {"command": cmd, "params": _params_out(params, alpha=args.alpha)}
        est = integration.weighted_norm_integral_mc(params, args.alpha, args.samples, args.seed, args.shards)
        out["estimate"] = est.as_dict()
        if args.closed_form:
            out["closed_form"] = integration.weighted_norm_integral_closed(params, args.alpha)
        return out
    raise ParameterError(f"unknown subcommand {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check":
        try:
            cfg = SuiteConfig(args.domain, args.mu, args.alpha, n_samples=args.samples, seed=args.seed,
                              step=args.step, order=args.order, mc_samples=args.mc_samples,
                              tolerances=dict(args.tol), out=args.out, dump_samples=args.dump_samples)
        except ParameterError as exc:
            parser.error(str(exc))
        reports, status = run_suite(cfg, args.suite)
        doc = {"command": "check", "params": _params_out(cfg.params, alphas=[float(a) for a in cfg.alphas]),
               "results": reports, "pass": status == 0}
        text = dumps(doc)
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text + "\n")
        print(text)
        for r in reports:
            if not r.passed:
                print(r.summary(), file=sys.stderr)
        return status
    try:
        doc = eval_command(args)
    except (ParameterError, HartogsError) as exc:
        parser.error(str(exc))
    print(dumps(doc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
