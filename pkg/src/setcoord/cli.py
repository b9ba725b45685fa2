"""``setcoord`` command line.

Every command prints one report (JSON by default) to stdout; diagnostics go
to stderr.  Exit codes: 0 ok, 1 infeasible or uncoordinatable instance,
2 bad input, 3 resource cap hit, 4 a verification check failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import graph as graphmod
from .cover import asymptotic_capacity, disjoint_neighborhood_packing, n_letter_rate, one_shot_capacity
from .errors import InfeasibleError, InputError, PreconditionError, ResourceError
from .fflinalg import DEFAULT_ENUM_CAP, FfMatrix, Subspace
from .graph import DEFAULT_CAP
from .infotheory import (
    INF,
    Pmf,
    hide_and_seek_value,
    maxmin_characterization,
    min_information_over_allowed_channels,
)
from .lincoord import (
    BcProblem,
    LinearCoordProblem,
    MacProblem,
    bc_region_witness,
    linear_capacity,
    mac_capacities,
    nonlinear_equals_linear_check,
    synthesize_code,
    verify_code,
)
from .sideinfo import SideInfoProblem, asymptotic_capacity_side, n_letter_rate_side, one_shot_capacity_side
from .verify import SUITES, run_suites

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3, 4


class VerificationFailed(Exception):
    """Raised after the report is built when a self-check did not pass."""

    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


# ---------------------------------------------------------------------------
# rendering


def exact(v) -> str:
    return str(Fraction(v))


def real(x: float) -> float:
    return float(f"{float(x):.12g}")


def _plain(obj):
    """Convert report values into JSON-ready types with fixed formatting."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return exact(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return real(obj)
    if isinstance(obj, FfMatrix):
        return [list(r) for r in obj.data]
    if isinstance(obj, Subspace):
        return [list(r) for r in obj.basis.data]
    return obj


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k in sorted(obj):
        v = obj[k]
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    return lines


def render(report: dict, fmt: str) -> str:
    report = _plain(report)
    if fmt == "text":
        return "\n".join(_text(report))
    return json.dumps(report, sort_keys=True, indent=2)


def _read(path: str) -> tuple[dict, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return obj, hashlib.sha256(raw).hexdigest()


def _labels(d: dict) -> dict:
    return {graphmod.label_str(k): v for k, v in d.items()}


# ---------------------------------------------------------------------------
# commands; each returns (results, certificates, digest)


def cmd_capacity(args):
    obj, digest = _read(args.input)
    g = graphmod.from_json(obj)
    if args.mode == "oneshot":
        cap = one_shot_capacity(g, args.cap_graph)
        res = {"IP": cap.exact, "bits": cap.bits}
        cert = {"cover": [graphmod.label_str(y) for y in cap.certificate.cover]}
    elif args.mode == "asymptotic":
        cap = asymptotic_capacity(g)
        res = {"LP": cap.exact, "bits": cap.bits}
        cert = {"cover_weights": _labels(cap.certificate.weights),
                "packing_weights": _labels(cap.certificate.dual_weights)}
    else:
        cap = n_letter_rate(g, args.n, args.cap_graph)
        res = {"n": args.n, "IP": cap.exact, "bits": cap.bits}
        cert = {"cover": [graphmod.label_str(y) for y in cap.certificate.cover]}
    if args.mode != "nletter":
        res["IP_dagger"] = disjoint_neighborhood_packing(g, args.cap_graph).size
    return res, cert, digest


def _alpha(text: str):
    if text in ("inf", "infinity"):
        return INF
    if text in ("0", "1"):
        return int(text)
    raise InputError("--alpha must be 0, 1 or inf")


def cmd_renyi(args):
    obj, digest = _read(args.input)
    g = graphmod.from_json(obj)
    alpha = _alpha(args.alpha)
    if args.pmf:
        pobj, pdigest = _read(args.pmf)
        pmf = Pmf.from_json(pobj)
        bits = min_information_over_allowed_channels(g, pmf, alpha)
        return {"alpha": args.alpha, "bits": bits}, {}, digest + ":" + pdigest
    m = maxmin_characterization(g, alpha)
    res = {"alpha": args.alpha, "bits": m.bits}
    if m.exact is not None:
        res["exact"] = m.exact
    cert = {}
    if m.q is not None:
        cert["q"] = {graphmod.label_str(x): v for x, v in zip(g.x_labels, m.q)}
    if m.lp_bits is not None:
        res["log2_LP"] = m.lp_bits
        res["lower_bound"] = m.lower_bound
        res["certified"] = m.certified
    return res, cert, digest


def cmd_game(args):
    obj, digest = _read(args.input)
    gv = hide_and_seek_value(graphmod.from_json(obj))
    return {"value": gv.value}, {"hider": _labels(gv.hider_strategy), "seeker": _labels(gv.seeker_strategy)}, digest


def cmd_sideinfo(args):
    obj, digest = _read(args.input)
    p = SideInfoProblem.from_json(obj)
    if args.mode == "oneshot":
        cap = one_shot_capacity_side(p, args.cap_graph)
        return {"IP": cap.exact, "bits": cap.bits}, {"per_class_IP": cap.certificate}, digest
    if args.mode == "asymptotic":
        cap = asymptotic_capacity_side(p)
        return {"LP": cap.exact, "bits": cap.bits}, {"per_class_LP": cap.certificate}, digest
    r = n_letter_rate_side(p, args.n, args.cap_graph)
    per_type = {",".join(map(str, t)): ip for t, ip in sorted(r.per_type.items())}
    return ({"n": r.n, "IP": r.exact, "bits": r.bits},
            {"best_type": dict(zip(p.x2_labels, r.best_type)), "per_type_IP": per_type}, digest)


def cmd_linear(args):
    obj, digest = _read(args.input)
    p = LinearCoordProblem.from_json(obj)
    capacity = linear_capacity(p)
    res = {"t": capacity.t}
    cert = {"U": capacity.U}
    failed = False
    if args.synthesize:
        code = synthesize_code(p)
        ok = verify_code(p, code)
        cert["code"] = {"S": code.S, "A": code.A, "B": code.B}
        res["code_verified"] = ok
        failed |= not ok
    if args.check_nonlinear:
        try:
            chk = nonlinear_equals_linear_check(p, args.cap_graph)
        except PreconditionError as exc:
            res["nonlinear"] = {"skipped": str(exc)}
        else:
            res["nonlinear"] = {
                "IP": chk.ip, "LP": chk.lp, "IP_dagger": chk.ip_dagger,
                "equalities": chk.equalities, "bits": chk.bits,
                "witnesses_ok": chk.witnesses_ok, "support_differs": chk.support_differs,
                "passed": chk.passed,
            }
            cert["witnesses"] = chk.witnesses
            failed |= not chk.passed
    if failed:
        raise VerificationFailed((res, cert, digest))
    return res, cert, digest


def cmd_maclin(args):
    obj, digest = _read(args.input)
    p = MacProblem.from_json(obj)
    f1, f2 = mac_capacities(p)
    feasible = args.t1 >= f1.t and args.t2 >= f2.t
    return ({"feasible": feasible, "t1_min": f1.t, "t2_min": f2.t},
            {"U1": f1.U, "U2": f2.U}, digest)


def cmd_bclin(args):
    obj, digest = _read(args.input)
    p = BcProblem.from_json(obj)
    w = bc_region_witness(p, args.t1, args.t2, args.cap_enum)
    cert = {} if w is None else {"U1": w[0], "U2": w[1]}
    return {"feasible": w is not None}, cert, digest


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    results = run_suites(names, seed=args.seed, scale=args.scale)
    res = {r.name: {"cases": r.cases, "failures": r.failures, "passed": r.passed} for r in results}
    res["passed"] = all(r.passed for r in results)
    out = (res, {}, None)
    if not res["passed"]:
        raise VerificationFailed(out)
    return out


COMMANDS = {
    "capacity": cmd_capacity,
    "renyi": cmd_renyi,
    "game": cmd_game,
    "sideinfo": cmd_sideinfo,
    "linear": cmd_linear,
    "maclin": cmd_maclin,
    "bclin": cmd_bclin,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cap-graph", type=int, default=DEFAULT_CAP,
                        help=f"max vertices per side of any built graph (default {DEFAULT_CAP})")
    common.add_argument("--cap-enum", type=int, default=DEFAULT_ENUM_CAP,
                        help=f"max subspaces enumerated per dimension (default {DEFAULT_ENUM_CAP})")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")

    ap = argparse.ArgumentParser(prog="setcoord", description="Zero-error set coordination capacities.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ("capacity", "sideinfo"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--input", required=True)
        sp.add_argument("--mode", choices=("oneshot", "asymptotic", "nletter"), required=True)
        sp.add_argument("--n", type=int, default=2)
    sp = sub.add_parser("renyi", parents=[common])
    sp.add_argument("--input", required=True)
    sp.add_argument("--alpha", required=True, help="0, 1 or inf")
    sp.add_argument("--pmf", help="fix q(x) instead of maximizing over it")
    sp = sub.add_parser("game", parents=[common])
    sp.add_argument("--input", required=True)
    sp = sub.add_parser("linear", parents=[common])
    sp.add_argument("--input", required=True)
    sp.add_argument("--synthesize", action="store_true")
    sp.add_argument("--check-nonlinear", action="store_true")
    for name in ("maclin", "bclin"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--input", required=True)
        sp.add_argument("--t1", type=int, required=True)
        sp.add_argument("--t2", type=int, required=True)
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--suite", choices=("all",) + SUITES, default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale", type=int, default=1)
    return ap


def _emit(args, argv, out, started, stdout) -> None:
    res, cert, digest = out
    report = {"command": ["setcoord"] + list(argv), "results": res, "certificates": cert}
    if digest is not None:
        report["input_sha256"] = digest
    if args.timing:
        report["timing_seconds"] = time.perf_counter() - started
    print(render(report, args.format), file=stdout)


def run(argv=None, stdout=None, stderr=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    started = time.perf_counter()
    try:
        if getattr(args, "n", 1) < 1:
            raise InputError("--n must be >= 1")
        out = COMMANDS[args.command](args)
    except VerificationFailed as exc:
        _emit(args, argv, exc.report, started, stdout)
        print("setcoord: verification failed", file=stderr)
        return EXIT_VERIFY
    except InfeasibleError as exc:
        print(f"setcoord: infeasible: {exc}", file=stderr)
        return EXIT_INFEASIBLE
    except (InputError, PreconditionError) as exc:
        print(f"setcoord: input error: {exc}", file=stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"setcoord: resource cap: {exc}", file=stderr)
        return EXIT_RESOURCE
    _emit(args, argv, out, started, stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
