"""Command line front end: ``helly-select {select,center,lowerbound,probe-conjecture2}``.

Exit status: 0 when every certificate passes, 2 for unreadable or malformed
input, 3 for precondition violations, 4 when a certificate fails or cannot be
produced for numerical reasons.
"""
import argparse
import sys
import time

import numpy as np

from .centers import CENTER_METHODS, asymmetry_lambda, compute_center
from .exceptions import CertificateError, NumericalFailure, PreconditionError
from .grunbaum import Check
from .io import ParseError, dumps, parse_vectors, read_instance, sha256_bytes
from .lower_bound import conjecture2_probe, diameter_gap_experiment
from .pipeline import MODE_ALIASES, polarize, run_pipeline
from .polytope import enumerate_vertices, require_body
from .tolerance import Tolerance

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_CERTIFICATE = 4


def _check_rows(checks):
    return [{"name": c.name, "value": c.value, "bound": c.bound, "passed": c.passed} for c in checks]


def _bound(quantity, value, bound, certificate):
    return {"quantity": quantity, "value": value, "bound": bound, "certificate": certificate}


def _select_report(args, inst, tol):
    res = run_pipeline(inst.K, args.mode, args.center, tol)
    sel = res.selection
    d = inst.K.dim
    result = {
        "dimension": d, "n": inst.K.n, "mode": res.mode, "center_method": res.center_method,
        "indices": list(res.indices), "size": len(res.indices), "z": res.z,
        "lambda": res.lambda_, "certified_factor": res.certified_factor,
        "measured_factor": res.measured_factor, "polar_measured_factor": res.polar_measured_factor,
        "diam_ratio": res.diam_ratio, "vol_ratio": res.vol_ratio, "branch": sel.branch,
        "simplex": {"indices": list(sel.simplex.indices), "volume": sel.simplex.volume,
                    "method": sel.simplex.method},
    }
    if inst.labels is not None:
        result["labels"] = [inst.labels[i] for i in res.indices]
    bounds = [
        _bound("size", len(res.indices), 2 * d if res.mode == "mu_2d" else 2 * d + 1, "subfamily_size"),
        _bound("lambda", res.lambda_, d, "lambda_le_d"),
        _bound("measured_factor", res.measured_factor, res.certified_factor,
               "primal_measured_le_certified"),
        _bound("certified_factor", res.certified_factor,
               8 * d**3 if res.mode == "mu_2d" else 4 * d * d, "certified_le_dimension_constant"),
    ]
    if res.mode == "mu_2d":
        bounds.append(_bound("diam_ratio", res.diam_ratio, (2 * d) ** 3, "diam_ratio"))
        if res.vol_ratio is not None:
            bounds.append(_bound("vol_ratio", res.vol_ratio, float(2 * d) ** (3 * d), "vol_ratio"))
    return {"result": result, "bounds": bounds, "certificates": _check_rows(res.checks)}


def _center_report(args, inst, tol):
    K = inst.K
    require_body(K, tol)
    V = enumerate_vertices(K, tol, check=False)
    z = compute_center(K, args.center, V, tol)
    lam = asymmetry_lambda(polarize(K, z, tol).Q, tol)
    check = Check.le("lambda_le_d", lam, K.dim, 1e-6 / K.dim)
    return {"result": {"dimension": K.dim, "n": K.n, "center_method": args.center, "z": z,
                       "lambda": lam},
            "bounds": [_bound("lambda", lam, K.dim, "lambda_le_d")],
            "certificates": _check_rows([check])}


def _lowerbound_report(args, tol):
    exp = diameter_gap_experiment(args.dim, args.n, args.trials, args.seed)
    quad = min(r["p_form_value"] - r["trace_bound"] for r in exp["trials_detail"])
    checks = [
        Check.le("witness_norm_ge_bound", exp["witness_bound"] - 1e-6, exp["min_norm"], 0.0),
        Check.le("trace_le_witness_quadratic", -1e-6, quad, 0.0),
        Check.le("diameter_le_covering_bound", exp["diameter_K"], exp["diameter_bound"], 1e-6),
    ]
    bounds = [
        _bound("min_witness_norm", exp["min_norm"], exp["witness_bound"], "witness_norm_ge_bound"),
        _bound("diameter_K", exp["diameter_K"], exp["diameter_bound"], "diameter_le_covering_bound"),
    ]
    return {"result": exp, "bounds": bounds, "certificates": _check_rows(checks)}


def _probe_vectors(args):
    if args.vectors is not None:
        try:
            with open(args.vectors, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.vectors}: {exc}") from exc
        return parse_vectors(data), sha256_bytes(data)
    if args.dim is None or args.dim < 2:
        raise PreconditionError("give a vectors file or --dim >= 2")
    U = np.random.default_rng(args.seed).normal(size=(2 * args.dim, args.dim))
    return U / np.linalg.norm(U, axis=1)[:, None], None


def build_parser():
    p = argparse.ArgumentParser(prog="helly-select", description=__doc__.splitlines()[0])
    p.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("select", help="choose at most 2d (or 2d+1) halfspaces")
    s.add_argument("instance")
    s.add_argument("--mode", choices=sorted(MODE_ALIASES), default="2d")
    s.add_argument("--center", choices=CENTER_METHODS, default="centroid")
    s.add_argument("--out")

    c = sub.add_parser("center", help="center z and asymmetry constant of the polar")
    c.add_argument("instance")
    c.add_argument("--center", choices=CENTER_METHODS, default="centroid")
    c.add_argument("--out")

    lb = sub.add_parser("lowerbound", help="witness norms for random 2d-subfamilies of a sphere family")
    lb.add_argument("--dim", type=int, default=2)
    lb.add_argument("--n", type=int, default=360)
    lb.add_argument("--trials", type=int, default=100)
    lb.add_argument("--seed", type=int, default=0)
    lb.add_argument("--out")

    pc = sub.add_parser("probe-conjecture2", help="largest norm in a one-sided family of 2d unit halfspaces")
    pc.add_argument("vectors", nargs="?")
    pc.add_argument("--dim", type=int)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--out")
    return p


def _emit(report, out):
    text = dumps(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(args) -> int:
    start = time.perf_counter()
    tol = Tolerance.from_env()
    report = {"command": args.command,
              "tolerance": {"eps_rel": tol.eps_rel, "containment_slack": tol.containment_slack}}
    try:
        if args.command in ("select", "center"):
            inst = read_instance(args.instance)
            report["input_sha256"] = inst.sha256
            report["parameters"] = {"center": args.center}
            if args.command == "select":
                report["parameters"]["mode"] = args.mode
                report.update(_select_report(args, inst, tol))
            else:
                report.update(_center_report(args, inst, tol))
        elif args.command == "lowerbound":
            params = {"dim": args.dim, "n": args.n, "trials": args.trials, "seed": args.seed}
            report["parameters"] = params
            report["input_sha256"] = sha256_bytes(dumps(params).encode())
            report.update(_lowerbound_report(args, tol))
        else:
            U, digest = _probe_vectors(args)
            report["parameters"] = {"dim": int(U.shape[1]), "seed": None if digest else args.seed}
            report["input_sha256"] = digest or sha256_bytes(dumps(U).encode())
            report["result"] = conjecture2_probe(U)
            report["bounds"], report["certificates"] = [], []
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CertificateError, NumericalFailure) as exc:
        report.update(passed=False, error=str(exc))
        _emit(report, args.out)
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    report["passed"] = all(c["passed"] for c in report["certificates"])
    if args.timings:
        report["timings"] = {"total_seconds": time.perf_counter() - start}
    _emit(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_CERTIFICATE


def main(argv=None) -> int:
    return run(build_parser().parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
