"""Command-line entry point: ``eaesc run | list | describe``.

Exit codes: 0 when every expectation holds, 1 for a failed expectation or
an unknown name, 2 for a malformed scenario, 3 when a computation fails.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .errors import ComputationError, SchemaError
from .scenario import (OperationFailed, from_builtin, load_json, parse_scenario, render_json,
                       run_scenario)
from .space_calculus import DEFAULT_K0, builtin_names, builtin_scenario, builtin_scenarios

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_COMPUTE = 0, 1, 2, 3

# operation -> (citation label, one-line summary)
OPERATIONS = {
    "rank": ("artifact plumbing", "rank of an exact rational matrix"),
    "null_space": ("artifact plumbing", "kernel basis of an exact rational matrix"),
    "solve": ("Thm 4.1 proof", "one exact solution of a linear system, or NoSolution"),
    "complement_basis": ("Thm 4.1 proof", "standard vectors completing a subspace basis"),
    "shift": ("Lemma 3.3 proof", "forward or backward shift, index -d for symbol z^d"),
    "op_compose": ("artifact plumbing", "exact product of band-plus-finite-rank operators"),
    "is_fredholm": ("band Toeplitz criterion", "determinant symbol has no unit-circle zeros"),
    "index": ("Fredholm index", "minus the winding number plus finite-dimension offset"),
    "fredholm_data": ("Lemma 2.5", "alpha, beta, index, kernel and range complement"),
    "apply": ("artifact plumbing", "leading coordinates of an operator applied to a vector"),
    "range_alignment_iso": ("Thm 4.1 proof", "isomorphism carrying one range onto another"),
    "head_tail_iso": ("Lemma 4.3 proof", "Y ≅ Fin(j) ⊕ Y by splitting off leading coordinates"),
    "eae_check": ("Thm 1.3(ii)", "EAE holds iff alpha and beta agree"),
    "perturb_kernel": ("Lemma 3.2", "finite-rank R with alpha(T + R) = m"),
    "perturb_witness": ("Lemma 4.3", "witness with prescribed kernel dimension"),
    "sc_construct": ("Thm 4.1", "Schur coupling built from a witness"),
    "sc_verify": ("Eq. (1.2)", "checks U = A - B D^-1 C and V = D - C A^-1 B"),
    "couple_from_MN": ("Lemma 4.2", "coupling from invertible M, N with UM = I - ST"),
    "witness_power": ("Lemma 5.1(iii)", "witness of index k*m from one of index k"),
    "witness_from_complemented": ("Prop 5.5 proof", "S = [I - R; 0], T = [I 0]"),
    "witness_swap": ("Lemma 2.5", "exchanges S and T; alpha and beta are unchanged"),
    "witness_compress": ("Thm 4.1, alternative proof", "witness moved onto the ranges of U, V"),
    "sc_extend_blockdiag": ("Lemma 5.8(i) proof", "coupling extended by identity blocks"),
    "eae_construct": ("Eq. (1.1)", "explicit E, F with U ⊕ I = E (V ⊕ I) F"),
    "eae_verify": ("Eq. (1.1)", "checks an extension equivalence"),
    "ideal_intersect": ("Cor 3.4", "lcm of generators"),
    "ideal_sum": ("Lemma 3.7", "gcd of generators"),
    "iphi_of": ("Lemma 3.7", "bounds on the Fredholm-index ideal of a sum"),
    "eae_index": ("Eq. (1.3), Cor 3.4", "generator of I_Φ(X) ∩ I_Φ(Y)"),
    "isc_bounds": ("Eq. (1.7), Lemma 5.8, Prop 5.5", "certified bounds on I_SC(X, Y)"),
    "sc_index": ("Eq. (1.8)", "least positive element of I_SC, or bounds"),
    "verdict": ("Thm 1.5, Remark 5.6", "compares SC_k with EAE_k"),
    "builtin_scenarios": ("Thm 1.2(ii), 1.7, 1.9, 1.11, Prop 1.10, Ex. 5.9",
                          "library of space-level scenarios"),
    "run": ("Remark 5.6", "evaluate a scenario and compare with its expectations"),
}

_PARAMETRIZED = {"gm-vs-l2", "improj-equal", "improj-k0", "united-i", "united-ii",
                 "beyond-proj", "gm-hyperplane"}


def _job(job: tuple) -> tuple:
    """Runs one scenario; returns (label, report or None, exit code, error text)."""
    source, name, window, tolerance = job
    try:
        if source == "builtin":
            try:
                s = builtin_scenario(name)
            except KeyError as exc:
                return name, None, EXIT_FAIL, str(exc.args[0])
            kind, sc = "space", from_builtin(s)
        else:
            kind, sc = parse_scenario(load_json(name))
        report = run_scenario(kind, sc, window, tolerance)
        return name, report, EXIT_OK if report["pass"] else EXIT_FAIL, ""
    except SchemaError as exc:
        where = exc.path if source == "builtin" or exc.path.startswith(name) \
            else f"{name}: {exc.path}"
        return name, None, EXIT_SCHEMA, f"schema error at {where}: {exc.message}"
    except OperationFailed as exc:
        return name, None, EXIT_COMPUTE, f"computation error in {exc.operation}: {exc}"
    except ComputationError as exc:
        return name, None, EXIT_COMPUTE, f"computation error: {type(exc).__name__}: {exc}"


def _value_text(v: dict) -> str:
    text = str(v["value"]) if "value" in v else v["text"]
    return text if v.get("status") == "exact" else f"{text} (non-certified)"


def render_text(label: str, report: dict) -> str:
    lines = [f"== {label}"]
    inputs = report["inputs"]
    if inputs.get("description"):
        lines.append(inputs["description"])
    if inputs["kind"] == "space":
        for c in report["computed"]:
            lines.append(f"pair {c['pair']}: X = {c['x']}, Y = {c['y']}")
            lines.append(f"  I_Φ(X) {c['iphi_x']['lower']} .. {c['iphi_x']['upper']}, "
                         f"I_Φ(Y) {c['iphi_y']['lower']} .. {c['iphi_y']['upper']}")
            isc = c["isc"]
            isc_text = isc["upper"] if isc["exact"] else f"{isc['lower']} ⊆ I_SC ⊆ {isc['upper']}"
            lines.append(f"  eae = {_value_text(c['eae'])}, sc = {_value_text(c['sc'])}, "
                         f"I_SC = {isc_text}")
            for step in c["algorithm"]:
                lines.append(f"  algorithm: {step}")
            row = [f"{v['k']}:{v['verdict']}" for v in report["verdicts"]
                   if v["pair"] == c["pair"]]
            lines.append("  verdicts " + " ".join(row))
        for t in report["rule_trail"]:
            lines.append(f"  rule {t}")
    else:
        for c in report["computed"]:
            target = f" -> {c['as']}" if c["as"] else ""
            lines.append(f"step {c['step']}: {c['op']}({', '.join(map(str, c['args']))})"
                         f"{target} = {c['result']} [{c['status']}]")
    for e in report["expectations"]:
        what = e["claim"] + (f"@k={e['k']}" if "k" in e else "")
        mark = "PASS" if e["pass"] else "FAIL"
        cite = f" ({e['citation']})" if e.get("citation") else ""
        lines.append(f"{mark} {what}: expected {e['expected']}, got {e['actual']}{cite}")
    lines.append("result: " + ("pass" if report["pass"] else "FAIL"))
    return "\n".join(lines) + "\n"


def _parse_tolerance(text: str) -> float:
    try:
        tol = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if tol <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return float(tol)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("window must be at least 1")
    return n


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 1 with unknown names; 2 is reserved for schema errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAIL, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eaesc", description=(
        "Exact laboratory for equivalence after extension and Schur coupling."))
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate scenario files or builtin scenarios")
    run.add_argument("files", nargs="*", help="JSON scenario files")
    run.add_argument("--builtin", action="append", default=[], metavar="NAME",
                     help="builtin scenario, NAME or NAME:K (repeatable)")
    run.add_argument("--all-builtins", action="store_true",
                     help="run the default builtin library")
    run.add_argument("--verify-window", type=_positive, default=50, metavar="N",
                     help="coordinates checked by sc_verify and eae_verify (default 50)")
    run.add_argument("--numeric-tolerance", type=_parse_tolerance, default=1e-9,
                     metavar="RAT", help="singular-value cutoff of the numeric backend")
    run.add_argument("--json", metavar="PATH", help="write the machine report here")
    run.add_argument("--parallel", action="store_true",
                     help="evaluate independent scenarios in worker processes")
    sub.add_parser("list", help="list builtin scenarios")
    desc = sub.add_parser("describe", help="show the citation for an operation")
    desc.add_argument("op")
    return p


def _cmd_list() -> int:
    for name in builtin_names():
        s = builtin_scenario(name)
        param = f"  (parameter :K, default {DEFAULT_K0})" if name in _PARAMETRIZED else ""
        print(f"{name:15} {s.citation}{param}")
    return EXIT_OK


def _cmd_describe(op: str) -> int:
    if op not in OPERATIONS:
        print(f"unknown operation {op!r}; known: {', '.join(sorted(OPERATIONS))}",
              file=sys.stderr)
        return EXIT_FAIL
    cite, summary = OPERATIONS[op]
    print(f"{op}: {summary}\ncites: {cite}")
    return EXIT_OK


def _cmd_run(args) -> int:
    jobs = [("file", f, args.verify_window, args.numeric_tolerance) for f in args.files]
    names = list(args.builtin)
    if args.all_builtins:
        names += [s.name for s in builtin_scenarios()]
    jobs += [("builtin", n, args.verify_window, args.numeric_tolerance) for n in names]
    if not jobs:
        print("nothing to run: give scenario files, --builtin or --all-builtins",
              file=sys.stderr)
        return EXIT_FAIL
    if args.parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    code = EXIT_OK
    reports, errors = [], []
    for label, report, status, error in results:
        if report is not None:
            sys.stdout.write(render_text(label, report))
            reports.append({"scenario": label, **report})
        if error:
            print(error, file=sys.stderr)
            errors.append({"scenario": label, "exit_code": status, "error": error})
        code = max(code, status)
    if args.json:
        if len(jobs) == 1 and reports:
            doc = reports[0]
        else:
            doc = {"reports": reports, "errors": errors, "pass": code == EXIT_OK}
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(render_json(doc))
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        return _cmd_list()
    if args.command == "describe":
        return _cmd_describe(args.op)
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
