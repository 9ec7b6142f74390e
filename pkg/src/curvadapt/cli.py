"""Command-line front end.

One executable, ten subcommands, deterministic output: reports go to
stdout as JSON (sorted keys) unless a tabular format is requested,
diagnostics go to stderr.  Exit code 0 means success or an affirming
verdict, 2 means a mathematically meaningful negative verdict (distinct
or contradiction), 1 means a usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import cayley_plane, grassmannian, isoparametric, octonion, tube_flow
from .errors import CurvAdaptError
from .tube_flow import CurvatureBranch, PCSystem, TubeDescriptor

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NEGATIVE = 2

DEFAULT_SEED = 0
FORMAT_ENV = "CURVADAPT_FORMAT"

#: tolerance names accepted by --tol overrides
DEFAULT_TOLERANCES = {
    "spectrum_residual": 1e-9,
    "health": 1e-10,
    "profile_grid": 1e-9,
    "pole_merge": 1e-9,
    "cascade": 1e-6,
    "ratio": 1e-8,
}

_CONSTRAINT_ALIASES = {
    "ajj": "a_jj_const",
    "azz": "a_zz_const",
    "ratio": "ratio_const",
}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int = DEFAULT_SEED
    format: str = "json"
    tolerances: dict = field(default_factory=dict)

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract wants 1
        raise _UsageError(message)


def _parse_tolerances(pairs) -> dict:
    out = {}
    for item in pairs or []:
        name, sep, value = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            known = ", ".join(sorted(DEFAULT_TOLERANCES))
            raise _UsageError(
                f"unknown tolerance override {item!r}; use name=value with "
                f"name among: {known}"
            )
        try:
            out[name] = float(value)
        except ValueError:
            raise _UsageError(f"tolerance {name!r} needs a numeric value, got {value!r}")
    return out


def _load_json_arg(text: str, flag: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _UsageError(
            f"{flag}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        )


def _parse_system_json(payload, flag: str, label: str) -> isoparametric.ProfileSystem:
    if not isinstance(payload, list) or not payload:
        raise _UsageError(f"{flag}: expected a nonempty JSON array of branches")
    branches = []
    for idx, row in enumerate(payload):
        if not isinstance(row, dict):
            raise _UsageError(f"{flag}: branch {idx} is not an object")
        try:
            kappa = float(row["kappa"])
            theta = float(row["theta"])
            mult = int(row["mult"])
            regime = row.get("regime", "compact")
        except (KeyError, TypeError, ValueError) as exc:
            raise _UsageError(f"{flag}: branch {idx} malformed: {exc}")
        try:
            if regime == "compact":
                branch = CurvatureBranch.compact(kappa, theta, mult)
            elif regime == "flat":
                branch = CurvatureBranch.flat(theta, mult)
            elif regime in ("coth", "tanh", "const"):
                branch = CurvatureBranch.hyperbolic(kappa, theta, mult)
                if branch.regime != regime:
                    raise _UsageError(
                        f"{flag}: branch {idx} tagged {regime!r} but "
                        f"lambda(0)={theta!r} vs kappa={kappa!r} implies "
                        f"{branch.regime!r}"
                    )
            else:
                raise _UsageError(f"{flag}: branch {idx} has unknown regime {regime!r}")
        except CurvAdaptError as exc:
            raise _UsageError(f"{flag}: branch {idx}: {exc}")
        branches.append(branch)
    return isoparametric.ProfileSystem(PCSystem(tuple(branches)), label=label)


def _parse_alpha_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--alpha-grid expects a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"--alpha-grid expects numeric a:b:n, got {text!r}")
    if n < 1:
        raise _UsageError("--alpha-grid needs n >= 1")
    return np.linspace(a, b, n)


def _parse_window(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise _UsageError(f"--window expects a,b, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise _UsageError(f"--window expects numeric a,b, got {text!r}")
    if not a < b:
        raise _UsageError("--window needs a < b")
    return (a, b)


# --------------------------------------------------------------------------
# Subcommand handlers: each returns (payload, table_spec_or_None, exit_code)
# --------------------------------------------------------------------------


def _cmd_octonion_table(args, config):
    rows = octonion.multiplication_table()
    payload = {"dimension": octonion.DIM, "products": rows}
    table = (rows, ["i", "j", "sign", "k"])
    return payload, table, EXIT_OK


def _cmd_jacobi_spectrum(args, config):
    if args.space == "cayley":
        rng = np.random.default_rng(config.seed)
        xi = cayley_plane.random_unit_pair(rng)
        op = cayley_plane.jacobi_operator(xi, sign=args.sign)
        context = {"space": "cayley", "sign": args.sign, "seed": config.seed}
    else:
        bundle = grassmannian.StructureBundle.standard(args.m)
        xi = grassmannian.unit_with_angle(args.alpha, bundle)
        op = grassmannian.jacobi_operator_g2(xi, bundle)
        context = {"space": "grassmannian", "alpha": args.alpha, "m": args.m}
    spec = op.spectrum()
    residual = op.max_eigen_residual(spec)
    clusters = [
        {"value": c.value, "multiplicity": c.multiplicity} for c in spec.clusters
    ]
    payload = dict(context, clusters=clusters, max_residual=residual)
    ok = residual <= config.tol("spectrum_residual")
    payload["residual_ok"] = ok
    table = (clusters, ["value", "multiplicity"])
    return payload, table, EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_sectional_range(args, config):
    rng = np.random.default_rng(config.seed)
    lo, hi = math.inf, -math.inf
    for _ in range(args.samples):
        x = cayley_plane.random_unit_pair(rng)
        y = cayley_plane.random_unit_pair(rng)
        # orthonormalize y against x; resample handled by the loop count
        yv = y.vector() - x.inner(y) * x.vector()
        norm = float(np.linalg.norm(yv))
        if norm < 1e-8:
            continue
        y = cayley_plane.TangentPair.from_vector(yv / norm)
        k = cayley_plane.sectional_curvature(x, y, sign=args.sign)
        lo, hi = min(lo, k), max(hi, k)
    # structured extremal planes: an octonion-line plane and a transverse one
    e0 = cayley_plane.basis_pair(0)
    line_plane = cayley_plane.sectional_curvature(
        e0, cayley_plane.basis_pair(1), sign=args.sign
    )
    cross_plane = cayley_plane.sectional_curvature(
        e0, cayley_plane.basis_pair(8), sign=args.sign
    )
    for k in (line_plane, cross_plane):
        lo, hi = min(lo, k), max(hi, k)
    payload = {
        "sign": args.sign,
        "samples": args.samples,
        "seed": config.seed,
        "min": lo,
        "max": hi,
        "structured_planes": {"line": line_plane, "transverse": cross_plane},
    }
    return payload, None, EXIT_OK


def _cmd_tube_table(args, config):
    if args.core == "horosphere":
        if args.radius is not None:
            raise _UsageError("--radius is meaningless for a horosphere")
        descriptor = TubeDescriptor(args.ambient, args.core, None)
    else:
        if args.radius is None:
            raise _UsageError(f"--radius is required for core {args.core!r}")
        descriptor = TubeDescriptor(args.ambient, args.core, args.radius)
    system = tube_flow.tube_spectrum(descriptor)
    rows = [
        {
            "value": tube_flow.evolve(b, 0.0),
            "multiplicity": b.multiplicity,
            "kappa": b.kappa,
            "regime": b.regime,
        }
        for b in system.branches
    ]
    payload = {
        "ambient": args.ambient,
        "core": args.core,
        "radius": args.radius,
        "branches": rows,
        "total_multiplicity": system.total_multiplicity,
    }
    table = (rows, ["value", "multiplicity", "kappa", "regime"])
    return payload, table, EXIT_OK


def _cmd_theorem2(args, config):
    cert = tube_flow.theorem2_certificate(validate=not args.no_validate)
    payload = cert.to_json_dict()
    return payload, None, EXIT_OK if cert.positive else EXIT_NEGATIVE


def _cmd_theorem3(args, config):
    grid = _parse_alpha_grid(args.alpha_grid)
    constraint = _CONSTRAINT_ALIASES[args.constraint]
    cert = tube_flow.theorem3_sweep(
        grid, constraint=constraint, ratio_tol=config.tol("ratio")
    )
    payload = cert.to_json_dict()
    return payload, None, EXIT_OK if cert.positive else EXIT_NEGATIVE


def _cmd_profile_match(args, config):
    p = _parse_system_json(_load_json_arg(args.p, "--p"), "--p", "p")
    q = _parse_system_json(_load_json_arg(args.q, "--q"), "--q", "q")
    window = _parse_window(args.window) if args.window else None
    cert = isoparametric.profiles_equivalent(
        p,
        q,
        window=window,
        grid_tol=config.tol("profile_grid"),
        merge_tol=config.tol("pole_merge"),
    )
    payload = cert.to_json_dict()
    return payload, None, EXIT_OK if cert.positive else EXIT_NEGATIVE


def _cmd_cascade(args, config):
    sys_ = _parse_system_json(_load_json_arg(args.system, "--system"), "--system", "p")
    residuals = isoparametric.power_sum_cascade(sys_, args.kmax, args.t)
    payload = {
        "t": args.t,
        "k_max": args.kmax,
        "residuals": residuals,
        "max_residual": max(residuals),
        "passed": max(residuals) <= config.tol("cascade"),
    }
    return payload, None, EXIT_OK


def _cmd_grassmannian_check(args, config):
    bundle = grassmannian.StructureBundle.standard(args.m)
    bundle_defect = bundle.verify()
    rng = np.random.default_rng(config.seed)
    dim = bundle.dim
    health = 0.0
    verbatim_defect = 0.0
    for _ in range(args.triples):
        x, y, z = (rng.standard_normal(dim) for _ in range(3))
        rxyz = grassmannian.curvature_g2(x, y, z, bundle)
        ryxz = grassmannian.curvature_g2(y, x, z, bundle)
        health = max(health, float(np.max(np.abs(rxyz + ryxz))) / max(1.0, float(np.linalg.norm(rxyz))))
        w = rng.standard_normal(dim)
        pair_lhs = float(np.dot(rxyz, w))
        pair_rhs = float(np.dot(grassmannian.curvature_g2(z, w, x, bundle), y))
        scale = max(1.0, abs(pair_lhs))
        health = max(health, abs(pair_lhs - pair_rhs) / scale)
        v_lhs = float(np.dot(grassmannian.curvature_g2(x, y, z, bundle, verbatim=True), w))
        v_rhs = float(np.dot(grassmannian.curvature_g2(z, w, x, bundle, verbatim=True), y))
        verbatim_defect = max(verbatim_defect, abs(v_lhs - v_rhs) / max(1.0, abs(v_lhs)))
    pair = grassmannian.hopf_eigenvectors(
        grassmannian.unit_with_angle(args.alpha, bundle), bundle
    )
    ratio_defect = abs(
        pair.lambda1 / pair.lambda2
        - (1 + math.cos(args.alpha)) / (1 - math.cos(args.alpha))
    )
    constant = grassmannian.eigenvalue_constant(bundle)
    passed = (
        bundle_defect <= 1e-10
        and health <= config.tol("health")
        and verbatim_defect > config.tol("health")
        and pair.residual <= config.tol("spectrum_residual")
        and ratio_defect <= config.tol("ratio")
    )
    payload = {
        "m": args.m,
        "alpha": args.alpha,
        "seed": config.seed,
        "triples": args.triples,
        "bundle_defect": bundle_defect,
        "tensor_health": health,
        "verbatim_pair_defect": verbatim_defect,
        "hopf_residual": pair.residual,
        "hopf_eigenvalues": [pair.lambda1, pair.lambda2],
        "ratio_defect": ratio_defect,
        "eigenvalue_constant": constant,
        "passed": passed,
    }
    return payload, None, EXIT_OK if passed else EXIT_NEGATIVE


def _selftest_checks(seed: int):
    rng = np.random.default_rng(seed)
    checks = []

    def record(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    table = octonion.multiplication_table()
    record("octonion_basis_closure", len(table) == 64, f"{len(table)} products")

    worst = 0.0
    for _ in range(500):
        a, b = rng.standard_normal(8), rng.standard_normal(8)
        lhs = octonion.norm(octonion.multiply(a, b))
        rhs = octonion.norm(a) * octonion.norm(b)
        worst = max(worst, abs(lhs - rhs) / max(rhs, 1e-300))
    record("octonion_norm_multiplicative", worst <= 1e-12, f"max defect {worst:.2e}")

    ok = True
    for _ in range(5):
        xi = cayley_plane.random_unit_pair(rng)
        spec = cayley_plane.jacobi_operator(xi).spectrum()
        pairs = sorted((round(c.value), c.multiplicity) for c in spec.clusters)
        ok = ok and pairs == [(0, 1), (1, 8), (4, 7)]
    record("cayley_spectrum_shape", ok, "clusters {0:1, 1:8, 4:7}")

    sums_ok = True
    for ambient, core in (("op2", "line"), ("op2", "hp2"), ("oh2", "hp2")):
        system = tube_flow.tube_spectrum(TubeDescriptor(ambient, core, 0.3))
        sums_ok = sums_ok and system.total_multiplicity == 15
    record("tube_multiplicity_sum", sums_ok, "all columns sum to 15")

    worst = 0.0
    for _ in range(50):
        branch = CurvatureBranch.compact(
            float(rng.choice([1.0, 2.0])), float(rng.uniform(0.3, math.pi - 0.3)), 1
        )
        t = float(rng.uniform(-0.05, 0.05))
        h = 1e-5
        fd = (tube_flow.evolve(branch, t + h) - tube_flow.evolve(branch, t - h)) / (2 * h)
        lam = tube_flow.evolve(branch, t)
        worst = max(worst, abs(fd - (lam**2 + branch.kappa**2)))
    record("riccati_flow_defect", worst <= 1e-6, f"max FD defect {worst:.2e}")

    cert = tube_flow.theorem2_certificate(validate=False)
    record(
        "focal_configuration_search",
        cert.positive and sorted(cert.details["families"]) == ["hp2", "sphere"],
        f"families {cert.details['families']}",
    )

    one, two = isoparametric.doubling_identity_pair()
    cert = isoparametric.profiles_equivalent(one, two)
    record(
        "doubling_identity_documented",
        cert.positive and not cert.details["multiset_match"],
        "profile equal, multisets differ",
    )

    ok = True
    for _ in range(10):
        vals = sorted(rng.uniform(-2, 2, size=int(rng.integers(1, 7))))
        sums = [sum(v**k for v in vals) for k in range(1, len(vals) + 1)]
        rec = isoparametric.newton_recover(sums)
        ok = ok and max(abs(a - b) for a, b in zip(rec, vals)) < 1e-7
    record("newton_round_trip", ok, "multisets recovered")

    return checks


def _cmd_selftest(args, config):
    checks = _selftest_checks(config.seed)
    all_passed = all(c["passed"] for c in checks)
    payload = {"seed": config.seed, "checks": checks, "all_passed": all_passed}
    return payload, None, EXIT_OK if all_passed else EXIT_NEGATIVE


# --------------------------------------------------------------------------
# Parser assembly and entry point
# --------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="curvadapt", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    env_format = os.environ.get(FORMAT_ENV, "json")
    if env_format not in ("json", "csv", "md"):
        env_format = "json"

    def common(p):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--format", choices=("json", "csv", "md"), default=env_format)
        p.add_argument(
            "--tol",
            action="append",
            metavar="NAME=VALUE",
            help="override a named tolerance",
        )

    p = sub.add_parser("octonion-table", help="all 64 basis products")
    common(p)
    p.set_defaults(handler=_cmd_octonion_table)

    p = sub.add_parser("jacobi-spectrum", help="normal Jacobi operator spectrum")
    common(p)
    p.add_argument("--space", choices=("cayley", "grassmannian"), default="cayley")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--alpha", type=float, default=0.7)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(handler=_cmd_jacobi_spectrum)

    p = sub.add_parser("sectional-range", help="sampled sectional curvature range")
    common(p)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.set_defaults(handler=_cmd_sectional_range)

    p = sub.add_parser("tube-table", help="principal curvatures of a tube")
    common(p)
    p.add_argument("--ambient", choices=tube_flow.AMBIENTS, required=True)
    p.add_argument("--core", choices=tube_flow.CORES, required=True)
    p.add_argument("--radius", type=float, default=None)
    p.set_defaults(handler=_cmd_tube_table)

    p = sub.add_parser("theorem2", help="finite search over focal configurations")
    common(p)
    p.add_argument("--no-validate", action="store_true",
                   help="skip the brute-force evolution cross-check")
    p.set_defaults(handler=_cmd_theorem2)

    p = sub.add_parser("theorem3", help="proportional-eigenvalue non-existence sweep")
    common(p)
    p.add_argument("--alpha-grid", required=True, metavar="A:B:N")
    p.add_argument("--constraint", choices=sorted(_CONSTRAINT_ALIASES), default="ajj")
    p.set_defaults(handler=_cmd_theorem3)

    p = sub.add_parser("profile-match", help="compare two mean-curvature profiles")
    common(p)
    p.add_argument("--p", required=True, metavar="JSON")
    p.add_argument("--q", required=True, metavar="JSON")
    p.add_argument("--window", default=None, metavar="A,B")
    p.set_defaults(handler=_cmd_profile_match)

    p = sub.add_parser("cascade", help="power-sum derivative identities")
    common(p)
    p.add_argument("--system", required=True, metavar="JSON")
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(handler=_cmd_cascade)

    p = sub.add_parser("grassmannian-check", help="structure bundle and tensor health")
    common(p)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--alpha", type=float, default=0.7)
    p.add_argument("--triples", type=int, default=50)
    p.set_defaults(handler=_cmd_grassmannian_check)

    p = sub.add_parser("selftest", help="run the invariant suite")
    common(p)
    p.set_defaults(handler=_cmd_selftest)

    return parser


def _emit(payload, table, fmt: str, out) -> None:
    if fmt == "json" or table is None:
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return
    rows, columns = table
    if fmt == "csv":
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(_cell(row[c]) for c in columns) + "\n")
        return
    out.write("| " + " | ".join(columns) + " |\n")
    out.write("|" + "|".join(" --- " for _ in columns) + "|\n")
    for row in rows:
        out.write("| " + " | ".join(_cell(row[c]) for c in columns) + " |\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = RunConfig(
            subcommand=args.subcommand,
            seed=args.seed,
            format=args.format,
            tolerances=_parse_tolerances(args.tol),
        )
        payload, table, code = args.handler(args, config)
    except _UsageError as exc:
        print(f"curvadapt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CurvAdaptError as exc:
        print(f"curvadapt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(payload, table, config.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
