"""
Command line front end.

    xmodkit <command> --input xm.json [--psi psi.json] [--budget N] [--seed N] [--json]
    xmodkit --task task.yaml

Documents are JSON or YAML files, or ``builtin:<name>`` references.
Exit codes: 0 success, 1 a negative result the caller asked to fail on
(or a failed check), 2 bad input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, Optional, Sequence, Tuple

from pydantic import BaseModel

from .catalog import builtin_crossed_module
from .checks import build_acceptance_battery
from .cohomology import h_order, solve_coboundary
from .config import COMMANDS, MAX_GROUP_ORDER, TaskSpec, XmodkitSettings, load_settings
from .crossed import CrossedModule, derive, validate
from .errors import BudgetExceeded, CrossedModuleError, InputError, XmodkitError
from .extensions import classify_report, obstruction_report, psi_from_record
from .grcat import roundtrip_report
from .groups import GroupHom, identity_hom, make_cyclic, trivial_hom
from .observability import configure_logging, emit_metric, init_observability, trace_operation
from .oracle import enumerate_extensions_bruteforce, schreier_check
from .records import CrossedModuleRecord, PsiRecord, load_record
from .reduction import choose_stick, reduce
from .reports import ErrorReport, ReductionReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

BUILTIN = "builtin:"

Outcome = Tuple[BaseModel, bool]


def resolve_crossed_module(ref: Optional[str], max_order: int = MAX_GROUP_ORDER) -> CrossedModule:
    """A crossed module from a file path or ``builtin:<name>``; not validated.

    Groups above ``max_order`` raise BudgetExceeded.
    """
    if not ref:
        raise InputError("this command needs --input")
    if not ref.startswith(BUILTIN):
        return CrossedModule.from_record(load_record(CrossedModuleRecord, ref), max_order=max_order)
    xm = builtin_crossed_module(ref[len(BUILTIN) :])
    largest = max(xm.B.order, xm.D.order)
    if largest > max_order:
        raise BudgetExceeded(f"group order {largest} exceeds the storage bound {max_order}")
    return xm


def resolve_psi(ref: Optional[str], xm: CrossedModule, max_order: int = MAX_GROUP_ORDER) -> GroupHom:
    """psi from a file, ``builtin:identity`` (on Coker d) or ``builtin:trivial-z<n>``."""
    if not ref:
        raise InputError("this command needs --psi")
    if ref.startswith(BUILTIN):
        name = ref[len(BUILTIN) :]
        coker = derive(xm).coker_group
        if name == "identity":
            return identity_hom(coker)
        if name.startswith("trivial-z") and name[len("trivial-z") :].isdigit():
            n = int(name[len("trivial-z") :])
            if n > max_order:
                raise BudgetExceeded(f"group order {n} exceeds the storage bound {max_order}")
            return trivial_hom(make_cyclic(n), coker)
        raise InputError(f"unknown builtin psi {name!r}; use 'identity' or 'trivial-z<n>'")
    return psi_from_record(xm, load_record(PsiRecord, ref), max_order=max_order)


# Command handlers: (report, negative)


def _validate(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    report = validate(resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order))
    return report, not report.is_valid


def _derive(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    return derive(resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order)).summary(), False


def _reduce(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    xm = resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order)
    stick = choose_stick(xm, task.seed)
    reduced = reduce(xm, stick)
    report = ReductionReport(
        subject=f"crossed module {xm.name}",
        seed=task.seed,
        reps=list(stick.reps),
        connecting=list(stick.connecting),
        pi0_order=reduced.pi0.order,
        pi1=list(derive(xm).ker_d.elements),
        k=reduced.k.to_record(),
        k_is_cocycle=True,
        k_class_zero=solve_coboundary(reduced.k) is not None,
        h3_order=h_order(reduced.pi1, 3),
    )
    return report, False


def _obstruction(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    xm = resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order)
    psi = resolve_psi(task.inputs.get("psi"), xm, settings.max_group_order)
    report = obstruction_report(xm, psi, task.seed)
    return report, False


def _classify(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    xm = resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order)
    psi = resolve_psi(task.inputs.get("psi"), xm, settings.max_group_order)
    report = classify_report(xm, psi, seed=task.seed)
    if task.slow:
        oracle = enumerate_extensions_bruteforce(xm, psi, budget=settings.budget, seed=task.seed)
        report.oracle_classes = len(oracle.classes)
    emit_metric("classes", len(report.classes), {"command": "classify"})
    return report, task.expect_nonempty and not report.classes


def _enumerate(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    xm = resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order)
    psi = resolve_psi(task.inputs.get("psi"), xm, settings.max_group_order)
    result = enumerate_extensions_bruteforce(xm, psi, budget=settings.budget, seed=task.seed)
    emit_metric("candidates", result.candidates, {"command": "enumerate"})
    return result.report(xm, psi), task.expect_nonempty and not result.classes


def _schreier(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    xm = resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order)
    psi = resolve_psi(task.inputs.get("psi"), xm, settings.max_group_order)
    report = schreier_check(xm, psi, budget=settings.budget, seed=task.seed, slow=task.slow)
    return report, not report.agree


def _roundtrip(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    xm = resolve_crossed_module(task.inputs.get("xm"), settings.max_group_order)
    report = roundtrip_report(xm, max_size=settings.max_category_size)
    return report, not report.isomorphic


def _check(task: TaskSpec, settings: XmodkitSettings) -> Outcome:
    report = build_acceptance_battery(settings).run_all()
    return report, not report.is_passing()


HANDLERS: Dict[str, Callable[[TaskSpec, XmodkitSettings], Outcome]] = {
    "validate": _validate,
    "derive": _derive,
    "reduce": _reduce,
    "obstruction": _obstruction,
    "classify": _classify,
    "enumerate": _enumerate,
    "schreier-check": _schreier,
    "roundtrip": _roundtrip,
    "check": _check,
}


def run(task: TaskSpec, settings: Optional[XmodkitSettings] = None) -> Tuple[int, BaseModel]:
    """Run one task and return (exit code, report).

    A task that fails on an error returns an ErrorReport in place of its report.
    """
    settings = settings or load_settings(budget=task.budget, seed=task.seed)
    if task.budget is not None and task.budget != settings.budget:
        settings = settings.model_copy(update={"budget": task.budget})
    handler = HANDLERS[task.command]
    try:
        with trace_operation(task.command, tags={"seed": task.seed, "budget": settings.budget}) as span:
            report, negative = handler(task, settings)
            span.set_tag("negative", negative)
            emit_metric("duration_ms", span.duration_ms(), {"command": task.command})
    except BudgetExceeded as exc:
        logger.error("Budget exceeded: %s", exc)
        return EXIT_BUDGET, ErrorReport.from_exception(exc)
    except (InputError, CrossedModuleError, FileNotFoundError) as exc:
        logger.error("Bad input: %s", exc)
        return EXIT_INPUT, ErrorReport.from_exception(exc)
    except XmodkitError as exc:
        logger.error("%s: %s (witness %s)", type(exc).__name__, exc, exc.witness)
        return EXIT_NEGATIVE, ErrorReport.from_exception(exc)
    return (EXIT_NEGATIVE if negative else EXIT_OK), report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="xmodkit",
        description="Crossed modules, Gr-categories and extensions of finite groups.",
    )
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="What to run")
    ap.add_argument("--task", help="YAML or JSON task file (replaces the other options)")
    ap.add_argument("--input", help="Crossed module document or builtin:<name>")
    ap.add_argument("--psi", help="psi document, builtin:identity or builtin:trivial-z<n>")
    ap.add_argument("--budget", type=int, help="Enumeration budget (default from XMODKIT_BUDGET)")
    ap.add_argument("--seed", type=int, default=0, help="Stick seed")
    ap.add_argument("--json", action="store_true", help="Emit the report as JSON")
    ap.add_argument("--expect-nonempty", action="store_true", help="Exit 1 on an empty classification")
    ap.add_argument("--slow", action="store_true", help="Add the slow cross-checks")
    return ap


def task_from_args(args: argparse.Namespace) -> TaskSpec:
    if args.task:
        return TaskSpec.from_file(args.task)
    if not args.command:
        raise InputError("give a command or --task")
    inputs = {role: ref for role, ref in (("xm", args.input), ("psi", args.psi)) if ref}
    return TaskSpec(
        command=args.command,
        inputs=inputs,
        budget=args.budget,
        seed=args.seed,
        output="json" if args.json else "text",
        expect_nonempty=args.expect_nonempty,
        slow=args.slow,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        task = task_from_args(args)
    except (InputError, FileNotFoundError) as exc:
        print(f"xmodkit: {exc}", file=sys.stderr)
        return EXIT_INPUT

    settings = load_settings(budget=task.budget, seed=task.seed)
    configure_logging(settings.log_level, settings.log_json)
    init_observability("xmodkit", settings.version)

    code, report = run(task, settings)
    if task.output == "json":
        print(report.model_dump_json(indent=2))
    elif isinstance(report, ErrorReport):
        print(f"xmodkit: {report.render_text()}", file=sys.stderr)
    else:
        print(report.render_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
