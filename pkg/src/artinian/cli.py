"""Command-line front end.

    artinian ring-show --ring R.ring
    artinian check --ring R.ring --sentence art:2
    artinian reduce "x = 0" --gens a1
    artinian solve --ring R.ring --system S.sys [--transfer EXT.ring | --transfer degree:2]
    artinian examples 1.8 --p 3 | artinian examples sec5

Exit codes: 0 computed (whatever the truth value), 1 input error, 2 budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import fol
from .fields import NotPrimeError
from .io import InputError, load_ring, load_system
from .localring import BudgetError, RingError, product_ring
from .transfer import (DEFAULT_BUDGET, TransferError, amalgam_search, example_1_8,
                       existential_transfer, extension_structure_check, grow, inclusion,
                       solve_bruteforce)


class CliInputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# reports


class RunReport:
    """Ordered key/value results rendered as text or as JSON."""

    def __init__(self, command, argv):
        self.data = {"command": command, "argv": list(argv), "inputs": {}, "results": {}}
        self._start = time.perf_counter()

    def digest(self, path):
        with open(path, "rb") as fh:
            self.data["inputs"][str(path)] = hashlib.sha256(fh.read()).hexdigest()[:16]

    def __setitem__(self, key, value):
        self.data["results"][key] = value

    def __getitem__(self, key):
        return self.data["results"][key]

    def finish(self):
        self.data["seconds"] = round(time.perf_counter() - self._start, 3)
        return self

    def render(self, fmt):
        if fmt == "machine":
            return json.dumps(self.data, indent=1, sort_keys=False)
        lines = [f"command: {self.data['command']}"]
        for path, h in self.data["inputs"].items():
            lines.append(f"input {path}: sha256 {h}")
        for k, v in self.data["results"].items():
            lines.extend(_text_lines(k, v, 0))
        lines.append(f"seconds: {self.data['seconds']}")
        return "\n".join(lines)


def _text_lines(key, value, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k, v in value.items():
            out.extend(_text_lines(k, v, depth + 1))
        return out
    if isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        out = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            out.extend(_text_lines(f"- [{i}]", v, depth + 1))
        return out
    if isinstance(value, bool):
        value = "yes" if value else "no"
    elif isinstance(value, list):
        value = ", ".join(str(v) for v in value)
    return [f"{pad}{key}: {value}"]


def _yn(b):
    return "yes" if b else "no"


# ---------------------------------------------------------------------------
# inputs


def _load_rings(args, report):
    if not args.ring:
        raise CliInputError("--ring is required")
    rings = []
    for path in args.ring:
        report.digest(path)
        rings.append(load_ring(path, order=args.order, max_degree=args.max_degree))
    R = rings[0]
    for S in rings[1:]:
        R = product_ring(R, S)
    return R


def _sentence(text):
    """Build the sentence named by a tag such as ``art:3`` or ``gor:2:3``."""
    name, _, rest = text.partition(":")
    nums = [int(x) for x in rest.split(":")] if rest else []

    def need(k):
        if len(nums) != k:
            raise CliInputError(f"sentence {name!r} takes {k} integer argument(s)")

    if name == "art":
        need(1)
        return fol.art(nums[0])
    if name == "artx":
        need(1)
        return fol.art_exact(nums[0])
    if name == "len":
        need(1)
        return fol.len_(nums[0])
    if name == "loc":
        need(0)
        return fol.loc()
    if name == "min":
        need(0)
        return fol.min_sentence()
    if name == "ec":
        need(1)
        return fol.ec(nums[0])
    if name == "root":
        need(1)
        return fol.root_sentence(nums[0])
    if name == "gor":
        if len(nums) not in (1, 2):
            raise CliInputError("gor takes l or l:d (root degrees up to d, default 1)")
        d = nums[1] if len(nums) == 2 else 1
        return fol.syntax.conj(*fol.gor_axioms(nums[0], d))
    raise CliInputError(f"unknown sentence {text!r}; use art:l, artx:l, len:l, loc, min, ec:n, "
                        "root:d or gor:l[:d]")


# ---------------------------------------------------------------------------
# commands


def _ring_summary(R):
    if not getattr(R, "is_local", True) or not hasattr(R, "invariants"):
        return {"size": R.size, "local": False}
    inv = R.invariants()
    delta, E = R.delta_support()
    out = {
        "size": inv["size"],
        "residue field": f"F_{R.residue_field.size}",
        "characteristic": R.characteristic,
        "equicharacteristic": R.is_equicharacteristic(),
        "length": inv["length"],
        "embdim": inv["embdim"],
        "exponent": inv["exponent"],
        "type": inv["type"],
        "gorenstein": inv["gorenstein"],
        "x": list(R.x_names),
        "Delta_R": [" ".join(str(e) for e in a) for a in delta],
        "E_R": [R.format(v) for v in E],
    }
    out["summary"] = (f"length {inv['length']} embdim {inv['embdim']} exponent {inv['exponent']} "
                      f"type {inv['type']} gorenstein {_yn(inv['gorenstein'])}")
    return out


def cmd_ring_show(args, report):
    R = _load_rings(args, report)
    for k, v in _ring_summary(R).items():
        report[k] = v


def cmd_check(args, report):
    R = _load_rings(args, report)
    if not args.sentence:
        raise CliInputError("--sentence is required")
    f = _sentence(args.sentence)
    report["sentence"] = args.sentence
    report["quantifier depth"] = fol.quantifier_depth(f)
    value = fol.eval_fast(R, f, budget=args.budget)
    report["value"] = value
    depth = fol.quantifier_depth(f)
    if float(R.size) ** depth <= args.gate:
        ref = fol.eval_reference(R, f, gate=args.gate)
        report["reference"] = ref
        if ref != value:
            raise RuntimeError(f"evaluators disagree: fast {value}, reference {ref}")
    else:
        report["reference"] = f"skipped (|R|^depth above {args.gate:g})"


def cmd_reduce(args, report):
    if not args.formula:
        raise CliInputError("a formula is required")
    f = fol.parse(args.formula)
    gens = args.gens or ["a1"]
    red = fol.reduce_modulo(f, gens=gens)
    text = fol.format_formula(red)
    report["formula"] = fol.format_formula(f)
    report["generators"] = gens
    report["reduced"] = text
    report["round trip"] = fol.parse(text) == red
    report["shape"] = str(fol.shape(red))


def cmd_solve(args, report):
    R = _load_rings(args, report)
    if not args.system:
        raise CliInputError("--system is required")
    report.digest(args.system)
    system = load_system(R, args.system)
    report["ring"] = _ring_summary(R)["summary"]
    report["system"] = system.format().splitlines()
    sol = solve_bruteforce(system, budget=args.budget)
    report["solution over R"] = "none" if sol is None else [str(x) for x in sol]
    if not args.transfer:
        return
    S, hom = _extension(R, args, report)
    report["extension"] = _ring_summary(S)["summary"]
    report["extension residue field"] = f"F_{S.residue_field.size}"
    ext_sys = system.map(hom)
    t = solve_bruteforce(ext_sys, budget=args.budget)
    if t is None:
        report["solution over extension"] = "none"
        return
    report["solution over extension"] = [str(x) for x in t]
    res = existential_transfer(R, S, system, t, hom=hom, budget=args.budget, oracle=args.oracle)
    report["witnessed disjuncts"] = res.witnessed
    report["growth"] = [
        {"degree": s.degree, "field": f"F_{s.field_size}", "descended system solvable": s.descended,
         **({"oracle": s.oracle} if s.oracle is not None else {})}
        for s in res.steps]
    report["transferred solution"] = [str(x) for x in res.solution]
    report["final ring"] = res.ring.name
    report["final residue field"] = f"F_{res.field.size}"


def _extension(R, args, report):
    target = args.transfer
    if target.startswith("degree:"):
        d = int(target.split(":", 1)[1])
        S, hom = grow(R, d)
        report["extension source"] = f"residue field degree {d}"
        return S, hom
    report.digest(target)
    S = load_ring(target, order=args.order, max_degree=args.max_degree)
    hom = inclusion(R, S)
    check = extension_structure_check(R, S)
    report["structure"] = {k: _yn(v) for k, v in check.checks.items()}
    return S, hom


def cmd_examples(args, report):
    name = args.name
    if name == "1.8":
        rep = example_1_8(args.p)
        report["p"] = rep.p
        for k, v in rep.values.items():
            report[k] = v
        report["checks"] = {k: _yn(v) for k, v in rep.checks.items()}
        report["passed"] = rep.passed
    elif name == "sec5":
        rep = amalgam_search(args.p if args.p_given else 2, args.k1, args.k2, args.bound,
                             budget=args.budget)
        report["p"] = rep.p
        report["theta degrees"] = list(rep.degrees)
        report["bound"] = rep.bound
        report["fields"] = [{"m": f["m"], "embeddings": list(f["embeddings"]),
                             "commuting pairs": f["commuting"]} for f in rep.fields]
        report["amalgam found"] = rep.found
        if rep.found:
            m, a, b = rep.amalgam
            report["amalgam"] = {"m": m, "psi_1": a, "psi_2": b}
    else:
        raise CliInputError(f"unknown example {name!r}; use 1.8 or sec5")


COMMANDS = {
    "ring-show": cmd_ring_show,
    "check": cmd_check,
    "reduce": cmd_reduce,
    "solve": cmd_solve,
    "examples": cmd_examples,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", action="append", help="ring file; repeat for a product ring")
    common.add_argument("--system", help="polynomial system file")
    common.add_argument("--sentence", help="art:l artx:l len:l loc min ec:n root:d gor:l[:d]")
    common.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="search budget")
    common.add_argument("--gate", type=float, default=fol.evaluate.REFERENCE_GATE,
                        help="cross-check with the reference evaluator below this size")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--order", choices=("lex", "grlex"), default=None)
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--p", type=int, default=None)
    parser = argparse.ArgumentParser(prog="artinian", description="Finite Artinian local rings workbench")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ring-show", parents=[common], help="invariants of a ring")
    sub.add_parser("check", parents=[common], help="evaluate a named sentence")
    r = sub.add_parser("reduce", parents=[common], help="print Red of a formula")
    r.add_argument("formula", nargs="?")
    r.add_argument("--gens", nargs="+")
    s = sub.add_parser("solve", parents=[common], help="solve a system, optionally by transfer")
    s.add_argument("--transfer", help="extension ring file, or degree:d for a residue extension")
    s.add_argument("--oracle", action="store_true", help="brute force at every growth step too")
    e = sub.add_parser("examples", parents=[common], help="run a worked example")
    e.add_argument("name", help="1.8 or sec5")
    e.add_argument("--k1", type=int, default=2)
    e.add_argument("--k2", type=int, default=3)
    e.add_argument("--bound", type=int, default=6)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.budget = int(args.budget)
    args.p_given = args.p is not None
    if args.p is None:
        args.p = 3
    report = RunReport(args.command, argv)
    try:
        COMMANDS[args.command](args, report)
    except (BudgetError, fol.EvaluationBudgetError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (CliInputError, InputError, NotPrimeError, fol.FormulaSyntaxError, fol.CaptureError,
            TransferError, RingError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.finish().render(args.format))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
