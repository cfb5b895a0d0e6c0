# app/main.py
"""
Command-line front end.

Every subcommand reads or writes the group file format of
``app.schemas.group_file`` and prints either a text report or, with
``--json``, the JSON form of the same pydantic model.

    construct FAMILY [PARAMS...]   build a group and emit its group file
    analyze FILE                   order, exponent and structural predicates
    frobenius FILE                 Frobenius structures and their checks
    classify FILE                  Z/GZ recognition and presentation type
    schur FILE                     the Schur multiplier H²(G, Q/Z)
    b0 FILE                        the Bogomolov multiplier
    certify FILE --field SPEC      retract rationality verdict with its trace
    verify                         the built-in verification suites

Exit codes: 0 on success, 1 on a toolkit error or a failed verification,
2 on a usage error.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

import click
from pydantic import BaseModel, ValidationError

from app.core.config import settings
from app.core.errors import ToolkitError
from app.models.fields import builtin_field
from app.models.group import Group
from app.operations import constructors as c
from app.operations.bogomolov import compute_b0
from app.operations.cohomology import cohomology_summary, h2_qz
from app.operations.frobenius import frobenius_report
from app.operations.group_core import abelian_invariants, structural_predicates
from app.operations.gz_classify import gz_report
from app.operations.rationality import certify as certify_group
from app.operations.rationality import explain
from app.operations.verification import verify_all
from app.schemas.group_file import GroupFile
from app.schemas.presentation import PresentationParams
from app.schemas.reports import B0Result, FrobeniusReport, GZReport, VerificationReport

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# ----------------------------------------------------------------------
# Shared options
# ----------------------------------------------------------------------
@dataclass
class Options:
    as_json: bool = False
    cap: Optional[int] = None

    @property
    def order_cap(self) -> int:
        return self.cap if self.cap is not None else settings.ORDER_CAP

    @property
    def cohomology_cap(self) -> int:
        if self.cap is None:
            return settings.COHOMOLOGY_CAP
        return max(self.cap, settings.COHOMOLOGY_CAP)


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=settings.LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr)
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def common_options(command: Callable) -> Callable:
    """Add ``--json``, ``--cap`` and ``--verbose`` and pass an ``Options`` first."""

    @click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text.")
    @click.option("--cap", type=click.IntRange(min=1), default=None, help="Enumeration cap on the group order.")
    @click.option("--verbose", is_flag=True, help="Log at DEBUG level.")
    @functools.wraps(command)
    def wrapper(*args, as_json: bool, cap: Optional[int], verbose: bool, **kwargs):
        _configure_logging(verbose)
        return command(Options(as_json=as_json, cap=cap), *args, **kwargs)

    return wrapper


def _load(path: str, opts: Options) -> Group:
    return GroupFile.load(path).to_group(cap=opts.order_cap)


def _emit(opts: Options, payload: Any, text: str) -> None:
    if not opts.as_json:
        click.echo(text)
        return
    if isinstance(payload, BaseModel):
        click.echo(payload.model_dump_json(indent=2))
    else:
        click.echo(json.dumps(payload, indent=2))


def _ints(values: Sequence[str], count: Optional[int], family: str) -> list[int]:
    if count is not None and len(values) != count:
        raise click.UsageError(f"{family} takes {count} integer parameter(s), got {len(values)}")
    try:
        return [int(v) for v in values]
    except ValueError:
        raise click.UsageError(f"{family} parameters must be integers, got {' '.join(values)}") from None


# ----------------------------------------------------------------------
# construct
# ----------------------------------------------------------------------
GZ_FIELDS = {"II": ("m", "n", "r", "l", "k"), "III": ("m", "n", "r"), "IV": ("m", "n", "r", "k", "t")}
NS_FIELDS = ("m", "n", "r", "p")

FAMILIES = (
    "cyclic",
    "abelian",
    "dihedral",
    "symmetric",
    "alternating",
    "metacyclic",
    "quaternion",
    "sl2",
    "binary-icosahedral",
    "g-plus",
    "gz",
    "ns",
    "g1",
    "g2",
    "frobenius-sl25",
)


def _tagged_params(family: str, params: Sequence[str], fields_by_tag: dict) -> PresentationParams:
    if not params or params[0] not in fields_by_tag:
        raise click.UsageError(f"{family} needs a type tag first: one of {', '.join(fields_by_tag)}")
    tag, rest = params[0], params[1:]
    names = fields_by_tag[tag]
    values = _ints(rest, len(names), f"{family} {tag}")
    return PresentationParams(family=tag, **dict(zip(names, values)))


def build(family: str, params: Sequence[str], q: Optional[int] = None, zeta: Optional[int] = None) -> c.ConstructedGroup:
    """
    Dispatch ``construct`` to the constructor of ``family``.

    Raises click.UsageError for a wrong parameter count and
    pydantic.ValidationError for parameters violating a family's conditions.
    """
    simple: dict[str, tuple[int, Callable[..., c.ConstructedGroup]]] = {
        "cyclic": (1, c.cyclic),
        "dihedral": (1, c.dihedral),
        "symmetric": (1, c.symmetric),
        "alternating": (1, c.alternating),
        "metacyclic": (3, c.metacyclic),
        "quaternion": (1, c.quaternion_generalized),
        "sl2": (1, c.sl2),
        "g1": (1, c.g1_group),
        "g2": (1, c.g2_group),
    }
    if family in simple:
        count, builder = simple[family]
        return builder(*_ints(params, count, family))
    if family == "abelian":
        orders = _ints(params, None, family)
        if not orders:
            raise click.UsageError("abelian needs at least one cyclic factor order")
        return c.abelian(orders)
    if family in ("binary-icosahedral", "g-plus", "frobenius-sl25"):
        _ints(params, 0, family)
        if family == "binary-icosahedral":
            return c.binary_icosahedral(q, zeta)
        if family == "g-plus":
            return c.g_plus(q)
        return c.frobenius_sl25(q)
    if family == "gz":
        return c.gz_type(_tagged_params(family, params, GZ_FIELDS))
    if family == "ns":
        return c.nonsolvable_gz(_tagged_params(family, params, {"NS-I": NS_FIELDS, "NS-II": NS_FIELDS}))
    raise click.UsageError(f"Unknown family {family!r}")


def _metadata(cg: c.ConstructedGroup) -> dict:
    return {
        "family": cg.family,
        "params": {key: value for key, value in cg.params.items() if isinstance(value, (int, str))},
        "order": cg.order,
        "generator_names": list(cg.generators),
        "relations": cg.relations,
    }


# ----------------------------------------------------------------------
# Text renderers
# ----------------------------------------------------------------------
def _frobenius_text(report: FrobeniusReport) -> str:
    if not report.is_frobenius:
        return f"{report.group} (order {report.order}): not a Frobenius group"
    lines = [f"{report.group} (order {report.order}): {len(report.structures)} Frobenius structure(s)"]
    for s in report.structures:
        kind = "abelian" if s.kernel_abelian else "non-abelian"
        checks = "all checks pass" if s.checks and s.checks.all_true else f"checks: {s.checks}"
        lines.append(f"  kernel of order {s.kernel_order} ({kind}), complement of order {s.complement_order}; {checks}")
    return "\n".join(lines)


def _gz_text(name: str, report: GZReport) -> str:
    lines = [
        f"{name}: Z-group: {report.is_z_group}, GZ-group: {report.is_gz_group}",
        f"  solvable type: {report.solvable_type}, non-solvable type: {report.nonsolvable_type}",
    ]
    if report.params is not None:
        lines.append(f"  parameters: {report.params.model_dump(exclude_none=True)}")
    crit = report.complement_criterion
    if crit is not None:
        lines.append(
            f"  prime-order subgroup of order {crit.prime_order_subgroup_order}: "
            f"n={crit.n}, H={crit.h_tag}, Frobenius complement: {crit.is_frobenius_complement}"
        )
    return "\n".join(lines)


def _b0_text(name: str, result: B0Result) -> str:
    value = "unknown" if result.invariants is None else str(result.invariants)
    text = f"B0({name}) = {value} [{result.method}]"
    return f"{text}\n  {result.details}" if result.details else text


def _matrix_text(reports: list[VerificationReport]) -> str:
    lines = []
    for r in reports:
        passed = sum(ch.passed for ch in r.checks)
        lines.append(f"[{'PASS' if r.all_passed else 'FAIL'}] {r.subject} ({passed}/{len(r.checks)})")
        for ch in r.checks:
            if not ch.passed:
                lines.append(f"    FAIL {ch.name}" + (f": {ch.detail}" if ch.detail else ""))
    return "\n".join(lines)


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------
@click.group()
def cli() -> None:
    """Finite-group toolkit: constructions, multipliers and rationality certificates."""


@cli.command()
@click.argument("family", type=click.Choice(FAMILIES))
@click.argument("params", nargs=-1)
@click.option("--q", "q", type=int, default=None, help="Finite-field size for matrix families.")
@click.option("--zeta", type=int, default=None, help="Primitive 5th root of unity in F_q.")
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), default=None)
@common_options
def construct(opts: Options, family: str, params: tuple[str, ...], q: Optional[int], zeta: Optional[int], output: Optional[str]) -> int:
    """Build a group of FAMILY from PARAMS and emit its group file."""
    cg = build(family, params, q=q, zeta=zeta)
    gf = GroupFile.from_group(cg.group, metadata=_metadata(cg))
    if output is None:
        click.echo(gf.dumps())
        return 0
    gf.dump(output)
    summary = {"name": gf.name, "order": cg.order, "degree": gf.degree, "output": output}
    _emit(opts, summary, f"Wrote {gf.name} (order {cg.order}, degree {gf.degree}) to {output}")
    return 0


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@common_options
def analyze(opts: Options, path: str) -> int:
    """Order, exponent, element orders and structural predicates."""
    g = _load(path, opts)
    preds = structural_predicates(g)
    abelianization = abelian_invariants(g)
    counts = Counter(g.element_orders)
    payload = {
        "name": g.name,
        "order": g.order,
        "degree": g.degree,
        "exponent": g.exponent,
        "element_orders": {str(k): counts[k] for k in sorted(counts)},
        "is_abelian": preds.is_abelian,
        "is_cyclic": preds.is_cyclic,
        "is_nilpotent": preds.is_nilpotent,
        "is_solvable": preds.is_solvable,
        "is_perfect": preds.is_perfect,
        "center_order": preds.center.order,
        "derived_subgroup_order": preds.derived_subgroup.order,
        "abelianization": abelianization.model_dump(),
    }
    flags = [key[3:] for key in ("is_abelian", "is_cyclic", "is_nilpotent", "is_solvable", "is_perfect") if payload[key]]
    text = "\n".join(
        [
            f"{g.name}: order {g.order}, degree {g.degree}, exponent {g.exponent}",
            "  element orders: " + ", ".join(f"{k}:{v}" for k, v in payload["element_orders"].items()),
            f"  properties: {', '.join(flags) or 'none'}",
            f"  |Z(G)| = {preds.center.order}, |[G,G]| = {preds.derived_subgroup.order}, G/[G,G] = {abelianization}",
        ]
    )
    _emit(opts, payload, text)
    return 0


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@common_options
def frobenius(opts: Options, path: str) -> int:
    """Frobenius kernel/complement pairs with their structure checks."""
    report = frobenius_report(_load(path, opts))
    _emit(opts, report, _frobenius_text(report))
    return 0


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@common_options
def classify(opts: Options, path: str) -> int:
    """Z-group and GZ-group recognition with the presentation type."""
    g = _load(path, opts)
    report = gz_report(g)
    _emit(opts, report, _gz_text(g.name, report))
    return 0


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@common_options
def schur(opts: Options, path: str) -> int:
    """Invariant factors of the Schur multiplier M(G) = H²(G, Q/Z)."""
    g = _load(path, opts)
    summary = cohomology_summary(h2_qz(g, cap=opts.cohomology_cap))
    _emit(opts, summary, f"M({g.name}) = {summary.invariants}")
    return 0


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["auto", "full", "sylow", "criteria"]), default="auto", show_default=True)
@common_options
def b0(opts: Options, path: str, method: str) -> int:
    """The Bogomolov multiplier B0(G)."""
    g = _load(path, opts)
    result = compute_b0(g, method=method, cap=opts.cohomology_cap)
    _emit(opts, result, _b0_text(g.name, result))
    return 0


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--field", "field_spec", default="Q", show_default=True, help="Q, C, Qzeta:m or charp:q.")
@click.option("--depth", type=click.IntRange(min=0), default=None, help="Decomposition depth of the rule engine.")
@common_options
def certify(opts: Options, path: str, field_spec: str, depth: Optional[int]) -> int:
    """Decide retract rationality of k(G) from the known rules."""
    g = _load(path, opts)
    verdict = certify_group(g, builtin_field(field_spec), depth=depth)
    _emit(opts, verdict, explain(verdict))
    return 0


@cli.command("verify")
@click.option("--q", "q", type=int, default=None, help="Field size for the binary icosahedral checks.")
@click.option("--zeta", type=int, default=None, help="Primitive 5th root of unity in F_q.")
@click.option("--skip-slow", is_flag=True, help="Leave out the order-14520 Frobenius example.")
@common_options
def verify_command(opts: Options, q: Optional[int], zeta: Optional[int], skip_slow: bool) -> int:
    """Run every verification suite and print a pass/fail matrix."""
    reports = verify_all(include_slow=not skip_slow, q=q, zeta=zeta)
    payload = [r.model_dump(mode="json") for r in reports]
    _emit(opts, payload, _matrix_text(reports))
    return 0 if all(r.all_passed for r in reports) else 1


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------
def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="grouptool", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted.", err=True)
        return 1
    except ValidationError as exc:
        message = "; ".join(err["msg"] for err in exc.errors())
        click.echo(f"Error: {message}", err=True)
        return 1
    except ToolkitError as exc:
        click.echo(f"Error: {type(exc).__name__}: {exc}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(run())
