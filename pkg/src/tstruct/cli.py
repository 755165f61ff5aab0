"""Command-line front end.

Every run writes a reproducibility header (version, seed, sha256 of each
input file) to stderr and embeds it in the JSON report under ``"run"``.

Exit codes: 0 success or PASS, 1 FAIL, 2 usage or input error,
3 UNKNOWN or INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from . import filtration as fl
from .complexes import UNKNOWN, FreeComplex, cohomology, perfectness, shift as shift_complex
from .errors import TStructError, UndecidedError
from .graded_rings import GradedRing
from .spectral_poset import SpecSpace
from .truncation import tau, tau_leq
from .verify import FAIL, INCONCLUSIVE, MUTATIONS, SUITES, named_complex, overall_status, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
SCHEMA_POSET = "tstruct/poset@1"
SCHEMA_FILTRATION = "tstruct/filtration@1"
SCHEMA_CLASSIFY = "tstruct/classify@1"
SCHEMA_VERIFY = "tstruct/verify@1"

_WINDOW_FLAGS = ("--window", "--step-window")


class InputError(Exception):
    pass


class Inputs:
    """Loads input files and remembers their digests for the header."""

    def __init__(self):
        self.digests = {}

    def read(self, path: str):
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.digests[path] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None

    def ring(self, arg) -> GradedRing | None:
        if arg is None:
            return None
        return GradedRing.from_json(self.read(arg))

    def space(self, arg, ring: GradedRing | None = None, base: str | None = None) -> SpecSpace:
        if arg in (None, "skeleton"):
            if ring is None:
                raise InputError("the skeleton space needs --ring")
            return ring.skeleton()
        if base and not os.path.isabs(arg) and not os.path.exists(arg):
            arg = os.path.join(os.path.dirname(base), arg)
        return SpecSpace.from_json(self.read(arg))

    def filtration(self, path: str, ring: GradedRing | None = None, space_arg=None):
        data = self.read(path)
        ref = space_arg if space_arg is not None else data.get("space") if isinstance(data, dict) else None
        space = self.space(ref, ring, base=path)
        return fl.ThomasonFiltration.from_json(data, space)

    def complex(self, arg: str, ring: GradedRing | None) -> FreeComplex:
        if not os.path.exists(arg) and (arg == "R" or arg.startswith("R/(")):
            if ring is None:
                raise InputError("a named complex needs --ring")
            return named_complex(ring, arg)
        return FreeComplex.from_json(self.read(arg), ring)


def _z_arg(text: str | None, space: SpecSpace):
    if text is None:
        return space.points
    names = [t.strip() for t in _split_points(text)]
    return space.require_spcl([n for n in names if n])


def _split_points(text: str):
    """Split on commas outside parentheses, so ``(x),(x,y)`` gives two points."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


# -- verbs ---------------------------------------------------------------------

def cmd_poset(args, inp: Inputs):
    ring = inp.ring(args.ring)
    space = inp.space(args.space, ring)
    report = space.to_json()
    report.update({
        "schema": SCHEMA_POSET,
        "spcl_subsets": [sorted(s) for s in space.spcl_subsets()],
        "components": [sorted(c) for c in space.connected_components(space.points)],
    })
    return report, EXIT_OK


def cmd_filtration(args, inp: Inputs):
    ring = inp.ring(args.ring)
    phi = inp.filtration(args.filtration, ring, args.space)
    if args.action == "classify":
        report = fl.classify(phi, _z_arg(args.z, phi.space))
        report["schema"] = SCHEMA_CLASSIFY
        return report, EXIT_OK
    lo, hi = _int_window(args.window, phi)
    report = {
        "schema": SCHEMA_FILTRATION,
        "filtration": phi.to_json(),
        "values": {str(n): sorted(phi(n)) for n in range(lo, hi + 1)},
        "weak_cousin": fl.is_weak_cousin(phi),
        "eventually_vanishing": fl.is_eventually_vanishing(phi),
    }
    return report, EXIT_OK


def _int_window(text, phi):
    if text is None:
        a, b = phi.window()
        return a - 1, b + 1
    try:
        a, b = (int(t) for t in text.split(":"))
    except ValueError:
        raise InputError(f"window must look like -3:3, got {text!r}") from None
    return a, b


def cmd_truncate(args, inp: Inputs):
    ring = inp.ring(args.ring)
    E = inp.complex(args.complex, ring)
    ring = ring or E.ring
    phi = inp.filtration(args.filtration, ring, args.space)
    tri = tau(phi, E)
    report = tri.report(args.window)
    if args.perfect:
        report["A_perfect"] = perfectness(tri.A).to_json()
    ok = report["aisle_certificate"]["pass"] and report["coaisle_certificate"]["pass"]
    if not ok:
        return report, EXIT_FAIL
    if any(d["fg"] == UNKNOWN for part in ("A", "E", "B") for d in report[part]["degrees"].values()):
        return report, EXIT_UNKNOWN
    return report, EXIT_OK


def cmd_cohomology(args, inp: Inputs):
    ring = inp.ring(args.ring)
    E = inp.complex(args.complex, ring)
    rep = cohomology(E, args.window)
    report = rep.to_json()
    if args.perfect:
        report["perfectness"] = perfectness(E).to_json()
    return report, EXIT_UNKNOWN if UNKNOWN in rep.verdicts() else EXIT_OK


def cmd_classify(args, inp: Inputs):
    """Predicates plus homological evidence from probe truncations."""
    ring = inp.ring(args.ring)
    if ring is None:
        raise InputError("classify needs --ring")
    phi = inp.filtration(args.filtration, ring, args.space or "skeleton")
    space = phi.space
    Z = _z_arg(args.z, space)
    preds = fl.classify(phi, Z)
    probes = []
    base = [("R", named_complex(ring, "R"))] if Z == space.points else []
    for p in sorted(Z):
        base.append((f"K{p}", named_complex(ring, "R/" + p) if p != "(0)" else named_complex(ring, "R")))
    lo, hi = phi.window()
    for name, K in base:
        for s in range(-hi - 2, -lo + 3):
            A = tau_leq(phi, shift_complex(K, s))
            rep = cohomology(A)
            fg = rep.all_finite()
            entry = {"probe": name, "shift": s, "finitely_generated": fg}
            if fg:
                entry["perfect"] = perfectness(A).perfect
            else:
                entry["perfect"] = False
            probes.append(entry)
    evidence = {
        "restricts_db_coh": all(e["finitely_generated"] for e in probes),
        "restricts_perf": all(e["perfect"] for e in probes),
    }
    status = "PASS"
    for key, seen in evidence.items():
        if preds[key] and not seen:
            status = FAIL
        elif not preds[key] and seen and status != FAIL:
            status = INCONCLUSIVE
    report = {"schema": SCHEMA_CLASSIFY, **preds, "evidence": evidence, "probes": probes, "status": status}
    return report, {FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_UNKNOWN}.get(status, EXIT_OK)


def cmd_verify(args, inp: Inputs):
    if args.threads is not None:
        os.environ["TSTRUCT_THREADS"] = str(args.threads)
    step = tuple(int(t) for t in args.step_window.split(":"))
    reports = run_suite(args.suite, seed=args.seed, mutation=args.mutation, max_points=args.max_points,
                        step_window=step)
    status = overall_status(reports)
    report = {
        "schema": SCHEMA_VERIFY,
        "suite": args.suite,
        "status": status,
        "reports": [r.to_json(include_time=not args.no_time) for r in reports],
    }
    return report, {FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_UNKNOWN}.get(status, EXIT_OK)


# -- output ----------------------------------------------------------------------

def render_table(data, prefix="") -> list[str]:
    """Flatten a report into ``path  value`` rows; the rows carry exactly the JSON data."""
    rows = []
    if isinstance(data, dict):
        if not data:
            rows.append(f"{prefix}  {{}}")
        for k, v in data.items():
            rows.extend(render_table(v, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(data, list) and any(isinstance(v, (dict, list)) for v in data):
        for i, v in enumerate(data):
            rows.extend(render_table(v, f"{prefix}[{i}]"))
    else:
        rows.append(f"{prefix}  {json.dumps(data)}")
    return rows


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tstruct", description="Thomason filtrations and their t-structures.")
    p.add_argument("--version", action="version", version=f"tstruct {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(q):
        q.add_argument("--out", help="write the JSON report here instead of stdout")
        q.add_argument("--pretty", action="store_true", help="print a flat human-readable table")
        q.add_argument("--seed", type=int, default=7)

    q = sub.add_parser("poset", help="describe a finite spectral space")
    q.add_argument("--space", help="poset JSON file, or 'skeleton' with --ring")
    q.add_argument("--ring")
    common(q)
    q.set_defaults(func=cmd_poset)

    q = sub.add_parser("filtration", help="show or classify a Thomason filtration")
    q.add_argument("action", choices=["show", "classify"])
    q.add_argument("--filtration", required=True)
    q.add_argument("--space", help="overrides the filtration's own space reference")
    q.add_argument("--ring", help="needed when the space is the skeleton of a ring")
    q.add_argument("--z", help="comma-separated points of a specialization-closed subset (default: all)")
    q.add_argument("--window", help="index range lo:hi for show")
    common(q)
    q.set_defaults(func=cmd_filtration)

    for verb, func, helptext in (
        ("truncate", cmd_truncate, "truncation triangle of a complex"),
        ("cohomology", cmd_cohomology, "cohomology report of a complex"),
    ):
        q = sub.add_parser(verb, help=helptext)
        q.add_argument("--ring", help="ring descriptor JSON (optional if the complex carries one)")
        q.add_argument("--complex", required=True, help="complex JSON, or R, R/(x), R/(x,y)")
        if verb == "truncate":
            q.add_argument("--filtration", required=True)
            q.add_argument("--space", help="overrides the filtration's own space reference")
        q.add_argument("--window", help="internal degrees, e.g. -10:10 or -3:3,-3:3")
        q.add_argument("--perfect", action="store_true", help="also decide perfectness")
        common(q)
        q.set_defaults(func=func)

    q = sub.add_parser("classify", help="restriction predicates with probe evidence")
    q.add_argument("--ring", required=True)
    q.add_argument("--filtration", required=True)
    q.add_argument("--space")
    q.add_argument("--z")
    common(q)
    q.set_defaults(func=cmd_classify)

    q = sub.add_parser("verify", help="run verification suites")
    q.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    q.add_argument("--mutation", help="a mutation name, or 'default' for each suite's registered one: "
                   + ", ".join(f"{k}={v}" for k, v in MUTATIONS.items()))
    q.add_argument("--max-points", type=int, default=4, help="locality sweep: largest poset size")
    q.add_argument("--step-window", default="-2:2", help="locality sweep: change points lo:hi")
    q.add_argument("--threads", type=int)
    q.add_argument("--no-time", action="store_true", help="omit wall times so reports are bit-identical")
    common(q)
    q.set_defaults(func=cmd_verify)
    return p


def _join_windows(argv):
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _WINDOW_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_windows(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    inp = Inputs()
    try:
        report, code = args.func(args, inp)
    except (InputError, TStructError, KeyError, ValueError) as exc:
        if isinstance(exc, UndecidedError):
            print(f"tstruct: undecided: {exc}", file=sys.stderr)
            return EXIT_UNKNOWN
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"tstruct: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    header = {"tool": "tstruct", "version": __version__, "seed": args.seed, "inputs": inp.digests}
    print("# " + json.dumps(header, sort_keys=True), file=sys.stderr)
    report = {"run": header, **report}
    text = json.dumps(report, sort_keys=True) + "\n"
    if args.pretty:
        text = "\n".join(render_table(json.loads(text))) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
