"""Command line interface.

Subcommands: spectrum, magic, optimize, verify, zero-magic, nogo, support.
Every output (JSON or CSV) embeds the run manifest: tool version, command,
input paths, seed, threads, and the effective options.  Outputs contain no
timestamps, so identical manifests produce byte-identical files.  File
outputs are written atomically (temp file in the target directory, then
rename).

Exit codes: 0 success, 1 verification or search failure, 2 input/validation
error.  Failures print a machine-readable JSON object on standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .diagonal_gates import PhasePolynomial, RotationVector, random_polynomial
from .errors import MagicforgeError, SearchError, ValidationError
from .oracle import apply_diagonal, apply_gates, apply_rotation, oracle_spectrum, statevector
from .optimizer import OptimizerConfig, config_from_dict, run_pipeline
from .spectrum import (
    PauliSpectrum,
    f_alpha,
    flat_bound,
    nullity,
    spectrum_csv_rows,
    sre,
    stabilizer_max,
    support_size,
)
from .stabilizer import (
    StabilizerTableau,
    apply_clifford,
    canonicalize,
    random_stabilizer,
)
from .spectrum import shallow_spectrum
from .theorems import construct_zero_magic, nogo_witness, support_ceiling
from .transfer import (
    CliffordOp,
    LayerBlock,
    ParsedCircuit,
    apply_block,
    circuit_from_json,
    initial_spectrum,
)

_TOLERANCE_VERIFY = 1e-10


class VerificationFailure(MagicforgeError):
    """A CLI-level check did not pass; maps to exit code 1."""


def _threads_default() -> int:
    env = os.environ.get("MAGICFORGE_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _manifest(command: str, inputs: list[str], seed: int, threads: int, options: dict) -> dict:
    return {
        "tool": "magicforge",
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "threads": threads,
        "options": options,
    }


def _atomic_write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".magicforge.", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_text(manifest: dict, header: list[str], rows, extra_comments: list[str] = ()) -> str:
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
    for line in extra_comments:
        buf.write("# " + line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _oracle_run(parsed: ParsedCircuit):
    st = statevector(parsed.initial)
    for kind, obj in parsed.layers:
        if kind == "clifford":
            st = apply_gates(st, obj.gates)
        elif kind == "sqr":
            st = apply_rotation(st, obj)
        else:
            st = apply_diagonal(st, obj)
    return st


def _closed_form(parsed: ParsedCircuit):
    """(spectrum, method) via the fastest applicable exact path, else (None, ...)."""
    blocks = parsed.sqr_blocks()
    if blocks is not None:
        s = initial_spectrum(parsed.initial)
        for block in blocks:
            s = apply_block(s, block)
        return s, "transfer"
    if parsed.layers and parsed.layers[-1][0] == "gate" and all(
        kind == "clifford" for kind, _ in parsed.layers[:-1]
    ):
        tab = parsed.initial
        for _, cliff in parsed.layers[:-1]:
            tab = apply_clifford(tab, cliff)
        gate = parsed.layers[-1][1]
        return shallow_spectrum(canonicalize(tab), gate), "shallow"
    return None, "oracle"


def _spectrum_csv(s: PauliSpectrum, manifest: dict, comments: list[str]) -> str:
    return _csv_text(
        manifest, ["x_bits", "z_bits", "re", "im", "abs2"], spectrum_csv_rows(s), comments
    )


def _cmd_spectrum(args) -> int:
    parsed = circuit_from_json(_load_json(args.circuit))
    manifest = _manifest("spectrum", [args.circuit], args.seed, args.threads, {})
    closed, method = _closed_form(parsed)
    oracle_spec = oracle_spectrum(_oracle_run(parsed))
    comments = [f"source: {method}"]
    if closed is not None:
        dev = float(np.max(np.abs(np.abs(closed.values) - np.abs(oracle_spec.values))))
        comments.append(f"max_abs_magnitude_deviation_vs_oracle: {dev!r}")
        primary = closed
    else:
        primary = oracle_spec
    _atomic_write(args.output, _spectrum_csv(primary, manifest, comments))
    if args.output is not None:
        _atomic_write(args.output + ".oracle.csv", _spectrum_csv(oracle_spec, manifest, ["source: oracle"]))
    else:
        _atomic_write(None, _spectrum_csv(oracle_spec, manifest, ["source: oracle"]))
    return 0


def _cmd_magic(args) -> int:
    parsed = circuit_from_json(_load_json(args.circuit))
    alphas = sorted(set(args.alpha))
    manifest = _manifest("magic", [args.circuit], args.seed, args.threads, {"alpha": alphas})
    closed, method = _closed_form(parsed)
    spec = closed if closed is not None else oracle_spectrum(_oracle_run(parsed))
    results = []
    for a in alphas:
        results.append(
            {
                "alpha": a,
                "n": parsed.n,
                "F_alpha": f_alpha(spec, a),
                "M_alpha": sre(spec, a),
                "flat_bound": flat_bound(parsed.n, a),
                "stabilizer_max": stabilizer_max(parsed.n),
            }
        )
    payload = {
        "manifest": manifest,
        "n": parsed.n,
        "method": method,
        "results": results,
        "nullity": nullity(spec),
        "support": support_size(spec),
    }
    _atomic_write(args.output, _json_text(payload))
    return 0


def _cmd_optimize(args) -> int:
    tab = StabilizerTableau.from_json(_load_json(args.tableau))
    cfg_dict = _load_json(args.config) if args.config else {}
    cfg_dict.setdefault("seed", args.seed)
    config = config_from_dict(cfg_dict)
    manifest = _manifest(
        "optimize",
        [args.tableau] + ([args.config] if args.config else []),
        args.seed,
        args.threads,
        {"layers": args.layers, "config": cfg_dict},
    )
    results = run_pipeline(tab, args.layers, config)
    rows = []
    for i, res in enumerate(results):
        rows.append(
            (
                i,
                repr(res.f_before),
                repr(res.f_after),
                support_size(res.spectrum_after),
                repr(nullity(res.spectrum_after)),
            )
        )
    text = _csv_text(manifest, ["layer", "f_before", "f_after", "support", "nullity"], rows)
    _atomic_write(args.output, text)
    return 0


def _verify_case(n: int, seed_parts: tuple) -> float:
    from .spectrum import shallow_spectrum as closed

    rng = np.random.default_rng(list(seed_parts))
    tab = random_stabilizer(n, int(rng.integers(1 << 30)))
    gate = random_polynomial(n, rng)
    spec = closed(canonicalize(tab), gate)
    witness = oracle_spectrum(apply_diagonal(statevector(tab), gate))
    return float(np.max(np.abs(np.abs(spec.values) - np.abs(witness.values))))


def _cmd_verify(args) -> int:
    manifest = _manifest(
        "verify", [], args.seed, args.threads,
        {"n_max": args.n_max, "cases": args.cases, "tolerance": _TOLERANCE_VERIFY},
    )
    jobs = [
        (n, (args.seed, n, i)) for n in range(1, args.n_max + 1) for i in range(args.cases)
    ]
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            devs = list(pool.map(lambda j: _verify_case(*j), jobs))
    else:
        devs = [_verify_case(*j) for j in jobs]
    worst = max(devs) if devs else 0.0
    passed = worst <= _TOLERANCE_VERIFY
    payload = {
        "manifest": manifest,
        "cases_per_n": args.cases,
        "n_values": list(range(1, args.n_max + 1)),
        "max_abs_deviation": worst,
        "tolerance": _TOLERANCE_VERIFY,
        "passed": passed,
    }
    _atomic_write(args.output, _json_text(payload))
    if not passed:
        raise VerificationFailure(
            f"closed form deviates from the oracle by {worst!r} > {_TOLERANCE_VERIFY}"
        )
    return 0


def _cmd_zero_magic(args) -> int:
    tab = StabilizerTableau.from_json(_load_json(args.tableau))
    manifest = _manifest("zero-magic", [args.tableau], args.seed, args.threads, {"k": args.k})
    cert = construct_zero_magic(tab, args.k)
    payload = {
        "manifest": manifest,
        "k": cert.k,
        "level": cert.level,
        "gate": cert.gate.to_json(),
        "tableau": cert.tableau.to_json(),
        "f_alpha": {str(a): v for a, v in sorted(cert.f_alpha_values.items())},
        "nullity": cert.nullity_after,
        "stabilizer_confirmed": cert.stabilizer_confirmed,
    }
    _atomic_write(args.output, _json_text(payload))
    return 0


def _block_from_json(obj: dict) -> LayerBlock:
    try:
        n = int(obj["n"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"block JSON needs an integer 'n': {exc}") from exc
    cliff = None
    if obj.get("clifford"):
        cliff = CliffordOp(n, tuple(tuple(g) for g in obj["clifford"]))
    w = None
    if "sqr" in obj:
        w = RotationVector.from_json(obj["sqr"])
        if w.n != n:
            raise ValidationError("rotation length disagrees with block n")
    return LayerBlock(n, cliff, w)


def _block_to_json(block: LayerBlock) -> dict:
    out: dict = {"n": block.n}
    if block.clifford is not None and block.clifford.gates:
        out["clifford"] = [list(g) for g in block.clifford.gates]
    if block.w is not None:
        out["sqr"] = block.w.to_json()
    return out


def _cmd_nogo(args) -> int:
    block = _block_from_json(_load_json(args.block))
    manifest = _manifest(
        "nogo", [args.block], args.seed, args.threads,
        {"alpha": args.alpha, "trials": args.trials},
    )
    wit = nogo_witness(block, alpha=args.alpha, trials=args.trials, seed=args.seed)

    def state_payload(ws):
        return {
            "tableau": ws.tableau.to_json(),
            "pre_blocks": [_block_to_json(b) for b in ws.pre_blocks],
            "f_before": ws.f_before,
            "f_after": ws.f_after,
            "delta": ws.delta,
        }

    payload = {
        "manifest": manifest,
        "alpha": wit.alpha,
        "block": _block_to_json(wit.block),
        "increase": state_payload(wit.increase),
        "decrease": state_payload(wit.decrease),
        "trials_used": wit.trials_used,
    }
    _atomic_write(args.output, _json_text(payload))
    return 0


def _cmd_support(args) -> int:
    obj = _load_json(args.rotation)
    body = obj.get("sqr", obj)
    w = RotationVector.from_json(body)
    manifest = _manifest("support", [args.rotation], args.seed, args.threads, {})
    ceiling = support_ceiling(w)
    from .spectrum import sqr_shallow_spectrum
    from .stabilizer import plus_tableau

    counted = support_size(sqr_shallow_spectrum(canonicalize(plus_tableau(w.n)), w))
    payload = {
        "manifest": manifest,
        "n": w.n,
        "ceiling": ceiling,
        "counted": counted,
    }
    _atomic_write(args.output, _json_text(payload))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magicforge",
        description="Magic spectra, bounds and optimization for Clifford + diagonal circuits",
    )
    parser.add_argument("--version", action="version", version=f"magicforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="single seed for all randomness")
        p.add_argument("--threads", type=int, default=_threads_default(),
                       help="worker threads (or MAGICFORGE_THREADS)")
        p.add_argument("-o", "--output", default=None, help="output path (default: stdout)")

    p = sub.add_parser("spectrum", help="closed-form (when applicable) and oracle spectra as CSV")
    p.add_argument("circuit", help="circuit JSON path")
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("magic", help="F_alpha, M_alpha, nullity, support, bounds as JSON")
    p.add_argument("circuit", help="circuit JSON path")
    p.add_argument("--alpha", type=int, nargs="+", default=[2])
    common(p)
    p.set_defaults(func=_cmd_magic)

    p = sub.add_parser("optimize", help="greedy per-layer angle optimization; trajectory CSV")
    p.add_argument("tableau", help="initial stabilizer tableau JSON path")
    p.add_argument("--layers", type=int, required=True)
    p.add_argument("--config", default=None, help="optimizer config JSON path")
    common(p)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("verify", help="random closed-form vs oracle sweep")
    p.add_argument("--n-max", type=int, default=5, dest="n_max")
    p.add_argument("--cases", type=int, default=200, help="cases per qubit count")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("zero-magic", help="level-k gate that adds no magic to a state")
    p.add_argument("tableau", help="stabilizer tableau JSON path")
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_zero_magic)

    p = sub.add_parser("nogo", help="witness that one block both raises and lowers F_alpha")
    p.add_argument("block", help="block JSON path ({'n', 'clifford', 'sqr'})")
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--trials", type=int, default=200)
    common(p)
    p.set_defaults(func=_cmd_nogo)

    p = sub.add_parser("support", help="rotation-layer support ceiling vs attained count")
    p.add_argument("rotation", help="rotation JSON path ({'m','k'} or {'w'} or {'sqr': ...})")
    common(p)
    p.set_defaults(func=_cmd_support)

    return parser


def run_command(argv=None) -> int:
    """Parse argv, dispatch, and map failures onto the documented exit codes."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SearchError, VerificationFailure) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": type(exc).__name__}) + "\n")
        return 1
    except (ValidationError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": type(exc).__name__}) + "\n")
        return 2


# console-script entry point
main = run_command


if __name__ == "__main__":
    sys.exit(run_command())
