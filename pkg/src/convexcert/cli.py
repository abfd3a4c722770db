"""Command-line front end.

Exit codes: 0 when every check holds (or nothing was refuted), 1 when a
violation was found, 2 on usage, parse or domain errors.

JSON reports have the top-level keys ``command, config, verdict, min_gap,
violations, notes, details, meta``.  Floats are written as strings with 17
significant digits; ``meta`` carries the timestamp and is the only part
that varies between identical runs.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .convexity import DEFAULT_TOL, Verdict, certify_convex, find_violation_witness
from .corollaries import run_suite
from .errors import ConvexCertError
from .fnspec import Interval, parse_function, parse_interval
from .hamel import violation_demo
from .normed import aligned_triple, as_vec, check_aligned_inequality, refined_reverse_triangle
from .pwl import check_rearrangement_decreasing, check_rearrangement_increasing

COMMANDS = ("certify", "witness", "corollaries", "pwl", "normed", "hamel-demo")


@dataclass
class RunConfig:
    command: str
    function_text: Optional[str] = None
    domain: Optional[str] = None
    seed: int = 0
    samples: int = 10_000
    tol: float = DEFAULT_TOL
    output: str = "text"
    out_path: Optional[str] = None
    n_grid: int = 41
    p: float = 2.0
    a: Optional[str] = None
    b: Optional[str] = None
    c: Optional[str] = None
    d: Optional[str] = None

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        need = {
            "certify": ("function_text", "domain"),
            "witness": ("function_text", "domain"),
            "pwl": ("function_text", "a", "b", "c", "d"),
            "normed": ("a", "b", "c"),
        }.get(self.command, ())
        missing = [name for name in need if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--fn" if m == "function_text" else f"--{m}" for m in missing)
            raise UsageError(f"{self.command} requires {flags}")
        if self.samples < 0:
            raise UsageError("--samples must be non-negative")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def fmt_num(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _plain(obj):
    """Recursively convert to JSON types, floats becoming 17-digit strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_num(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_json(report: dict) -> str:
    return json.dumps(_plain(report), indent=2) + "\n"


def parse_json(text: str) -> dict:
    return json.loads(text)


def _report(config, verdict, min_gap=None, violations=(), notes=(), details=None):
    return {
        "command": config.command,
        "config": {k: v for k, v in dataclasses.asdict(config).items() if k not in ("output", "out_path")},
        "verdict": verdict,
        "min_gap": min_gap,
        "violations": list(violations),
        "notes": list(notes),
        "details": details or {},
        "meta": {
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
            "version": __version__,
        },
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _function(config):
    domain = parse_interval(config.domain) if config.domain else Interval.real_line()
    return parse_function(config.function_text, domain), domain


def _certify(config):
    f, I = _function(config)
    cert = certify_convex(f, I, config.n_grid, config.tol)
    violations = []
    if cert.witness is not None:
        t = cert.witness.triple
        violations.append({"inputs": [t.a, t.b, t.c], "gap": cert.witness.gap})
    details = {
        "grid_points": cert.grid_points,
        "triples": cert.n_triples,
        "strict": cert.strict,
        "midconvex_min_gap": cert.midconvex_min_gap,
    }
    code = 1 if cert.verdict is Verdict.REFUTED else 0
    return code, _report(config, cert.verdict.value, cert.min_gap, violations, [cert.summary()], details)


def _witness(config):
    f, I = _function(config)
    w = find_violation_witness(f, I, config.samples, config.seed, config.tol)
    if w is None:
        return 0, _report(config, "NO_WITNESS", None, [], ["no violating triple found within budget"])
    t = w.triple
    violation = {"inputs": [t.a, t.b, t.c], "gap": w.gap}
    return 1, _report(config, "WITNESS_FOUND", w.gap, [violation], [f"tolerance used {fmt_num(w.tolerance_used)}"])


def _corollaries(config):
    report = run_suite(config.seed, config.samples, config.tol)
    violations = []
    for name, entry in report.entries.items():
        for inputs, gap in entry.violations:
            violations.append({"corollary": name, "inputs": list(inputs), "gap": gap})
    stated = [e for e in report.entries.values() if e.stated_domain]
    failing = [e.name for e in stated if e.violation_count]
    gaps = [e.min_gap for e in stated if e.samples_tested]
    min_gap = min(gaps) if gaps else None
    notes = [f"{name}: violations on the stated domain" for name in failing]
    verdict = "VIOLATIONS" if failing else "ALL_HOLD"
    return (1 if failing else 0), _report(config, verdict, min_gap, violations, notes, report.as_dict())


def _pwl(config):
    phi, _ = _function(config)
    c, a, b, d = (float(v) for v in (config.c, config.a, config.b, config.d))
    lo, hi = min(a, b), max(a, b)
    if lo + hi < c + d:
        res = check_rearrangement_increasing(phi, c, a, b, d, config.tol)
        kind = "increasing"
    else:
        res = check_rearrangement_decreasing(phi, c, a, b, d, config.tol)
        kind = "decreasing"
    psi = res.psi
    details = {
        "kind": kind,
        "proof_gap": res.proof_gap,
        "s": psi.s,
        "breakpoints": list(psi.breakpoints),
        "values": list(psi.values),
        "slopes": list(psi.slopes),
    }
    violations = [] if res.holds else [{"inputs": [c, a, b, d], "gap": res.gap}]
    return (0 if res.holds else 1), _report(config, "HOLDS" if res.holds else "FAILS", res.gap, violations, [], details)


def _normed(config):
    t = aligned_triple(as_vec(config.a), as_vec(config.b), as_vec(config.c))
    aligned = check_aligned_inequality(t, config.p, config.tol)
    refined = refined_reverse_triangle(t, config.p, config.tol)
    holds = aligned.holds and refined.holds
    details = {
        "lambda0": t.lam0,
        "aligned_gap": aligned.gap,
        "refined_gap": refined.gap,
        "refined_bound": refined.refined_bound,
        "classical_bound": refined.classical_bound,
        "improvement": refined.improvement,
    }
    violations = []
    for name, r in (("aligned", aligned), ("refined_reverse_triangle", refined)):
        if not r.holds:
            violations.append({"check": name, "inputs": [t.a, t.b, t.c], "gap": r.gap})
    return (0 if holds else 1), _report(
        config, "HOLDS" if holds else "FAILS", min(aligned.gap, refined.gap), violations, [], details
    )


def _hamel(config):
    demo = violation_demo()
    details = demo.as_dict()
    violation = {"inputs": details["triple"], "gap": str(demo.three_point_gap)}
    notes = [
        "exact difference coordinates (" + ", ".join(str(v) for v in demo.difference.coords) + ")",
        f"midconvex on {demo.scan_pairs} lattice pairs, {demo.scan_failures} failures (exact)",
        f"g(sqrt2) + g(sqrt3) - g(1) - g(sqrt2 + sqrt3 - 1) = {demo.decimal}",
    ]
    verdict = "VIOLATION_CERTIFIED" if demo.inequality_violated and demo.scan_failures == 0 else "UNEXPECTED"
    return 1, _report(config, verdict, None, [violation], notes, details)


_HANDLERS = {
    "certify": _certify,
    "witness": _witness,
    "corollaries": _corollaries,
    "pwl": _pwl,
    "normed": _normed,
    "hamel-demo": _hamel,
}


def run(config: RunConfig) -> tuple[int, dict]:
    config.validate()
    return _HANDLERS[config.command](config)


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['verdict']}"]
    if report["min_gap"] is not None:
        lines.append(f"  min gap: {report['min_gap'] if isinstance(report['min_gap'], str) else fmt_num(report['min_gap'])}")
    for note in report["notes"]:
        lines.append(f"  {note}")
    for v in report["violations"][:10]:
        lines.append(f"  violation: {json.dumps(_plain(v), ensure_ascii=False)}")
    if len(report["violations"]) > 10:
        lines.append(f"  ... {len(report['violations']) - 10} more")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convexcert", description="Convexity and inequality verifier.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--out", dest="out_path", help="write the report to this file")

    for name in COMMANDS:
        p = sub.add_parser(name)
        common(p)
        if name in ("certify", "witness", "pwl"):
            p.add_argument("--fn", dest="function_text")
            p.add_argument("--domain")
        if name == "certify":
            p.add_argument("--n-grid", type=int, default=41)
        if name in ("pwl", "normed"):
            for v in "abc":
                p.add_argument(f"--{v}")
        if name == "pwl":
            p.add_argument("--d")
        if name == "normed":
            p.add_argument("--p", type=lambda s: math.inf if s.lower() in ("inf", "infinity") else float(s), default=2.0)
    return parser


_VALUE_FLAGS = ("--domain", "--fn", "--a", "--b", "--c", "--d", "--p", "--tol")


def _glue_negative_values(argv):
    # "--domain -2,2" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
            else:
                out.extend((tok, nxt))
        else:
            out.append(tok)
    return out


def config_from_args(argv) -> RunConfig:
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_parser().parse_args(_glue_negative_values(argv))
    values = vars(ns)
    values["output"] = "json" if values.pop("json") else "text"
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    return RunConfig(**{k: v for k, v in values.items() if k in fields})


def main(argv=None) -> int:
    try:
        config = config_from_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0
    try:
        code, report = run(config)
    except (UsageError, ConvexCertError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = emit_json(report) if config.output == "json" else render_text(report)
    if config.out_path:
        with open(config.out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
