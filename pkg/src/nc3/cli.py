"""Command-line front end.

Subcommands:

* ``check``       validate a configuration and report d-semistability;
* ``invariants``  smoothing invariants for one (family, partition);
* ``table``       invariants for every partition of a family;
* ``verify``      diff computed tables against the embedded reference rows;
* ``catalog``     list families, export configurations and reference tables.

Exit codes: 0 success, 1 validation/verification failure or inadmissible
input, 2 parse or schema errors.  Payloads go to stdout and are
deterministic (stable ordering, no timestamps); diagnostics for failures go
to stderr as single-line JSON.  ``table`` and ``verify`` evaluate partitions
in a thread pool unless ``NC3_NO_PARALLEL=1``; assembly order is stable
either way.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence, TypeVar

from . import catalog, construction, degeneration, invariants, ncconfig

OUTPUT_FORMAT_VERSION = "nc3-output/1"

T = TypeVar("T")
U = TypeVar("U")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2


class CliError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _map_ordered(fn: Callable[[T], U], items: Sequence[T]) -> list[U]:
    """Apply ``fn`` to every item, preserving input order in the result."""
    if os.environ.get("NC3_NO_PARALLEL") == "1" or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(8, len(items))) as pool:
        return list(pool.map(fn, items))


def _emit(payload: dict[str, Any], args: argparse.Namespace) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_text(text: str, args: argparse.Namespace) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _error_record(message: str, **extra: Any) -> str:
    rec = {"error": message}
    rec.update(extra)
    return json.dumps(rec, sort_keys=True)


def _parse_partition(text: str) -> catalog.PartitionSpec:
    """Parse ``5``, ``1,4`` or ``(1,0),(2,3)`` into a partition."""
    s = text.strip()
    try:
        if "(" in s:
            if not re.fullmatch(r"\s*\([^()]*\)(\s*,\s*\([^()]*\))*\s*", s):
                raise ValueError("expected comma-separated parenthesized pairs")
            parts = tuple(
                tuple(int(x.strip()) for x in group.split(","))
                for group in re.findall(r"\(([^()]*)\)", s)
            )
            return catalog.PartitionSpec(parts=parts)
        nums = tuple(int(x.strip()) for x in s.split(","))
        return catalog.PartitionSpec(parts=tuple((a,) for a in nums))
    except (ValueError, catalog.PartitionError) as exc:
        raise CliError(f"cannot parse partition {text!r}: {exc}", EXIT_PARSE)


def _load_config_file(path: str) -> tuple[ncconfig.NCConfiguration, dict[str, Any]]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE)
    digest = hashlib.sha256(raw).hexdigest()
    try:
        config = ncconfig.config_from_json(raw.decode("utf-8"))
    except (ncconfig.SchemaError, UnicodeDecodeError) as exc:
        raise CliError(f"schema error in {path}: {exc}", EXIT_PARSE)
    return config, {"path": path, "sha256": digest}


def _resolve_source(
    args: argparse.Namespace,
) -> tuple[ncconfig.NCConfiguration, construction.CollectiveDivisor | None, dict[str, Any]]:
    """Configuration (+ divisor when a catalog partition is given) from flags."""
    if args.family and args.config:
        raise CliError("give either --family or --config, not both", EXIT_PARSE)
    if args.config:
        config, provenance = _load_config_file(args.config)
        if getattr(args, "partition", None):
            raise CliError("--partition needs --family", EXIT_PARSE)
        return config, None, provenance
    if not args.family:
        raise CliError("one of --family or --config is required", EXIT_PARSE)
    try:
        fam = catalog.get_family(args.family)
    except catalog.UnknownFamily as exc:
        raise CliError(str(exc), EXIT_PARSE)
    provenance = {"catalog": fam.id}
    partition_text = getattr(args, "partition", None)
    if not partition_text:
        # Degree-one placeholder not meaningful: check-style commands on raw
        # family configurations use the trivial instantiation below.
        spec = catalog.PartitionSpec(parts=(fam.total_degree,))
        config, divisor = catalog.instantiate(fam, spec)
        return config, None, provenance
    spec = _parse_partition(partition_text).canonical()
    order_text = getattr(args, "order", None)
    if order_text:
        ordered = _parse_partition(order_text)
        if ordered.canonical().parts != spec.parts:
            raise CliError(
                f"--order {order_text!r} is not an ordering of partition "
                f"{spec.display()}",
                EXIT_PARSE,
            )
        spec = ordered
    try:
        config, divisor = catalog.instantiate(fam, spec)
    except catalog.PartitionError as exc:
        # the text parsed but the partition is inadmissible for this family
        raise CliError(str(exc), EXIT_FAIL)
    provenance["partition"] = spec.cli_form()
    return config, divisor, provenance


def _base_record(command: str, provenance: dict[str, Any]) -> dict[str, Any]:
    return {
        "format_version": OUTPUT_FORMAT_VERSION,
        "command": command,
        "source": provenance,
    }


# ---------------------------------------------------------------------------
# check


def cmd_check(args: argparse.Namespace) -> int:
    config, divisor, provenance = _resolve_source(args)
    record = _base_record("check", provenance)
    if args.after_blowup:
        if divisor is None:
            raise CliError("--after-blowup needs --family with --partition", EXIT_PARSE)
        try:
            config, _ = construction.sequential_blowup(config, divisor)
        except construction.AdmissibilityError as exc:
            record["diagnostics"] = [d.as_dict() for d in exc.diagnostics]
            _emit(record, args)
            return EXIT_FAIL
    diagnostics = ncconfig.validate(config)
    ok, residual = degeneration.is_d_semistable(config)
    record["diagnostics"] = [d.as_dict() for d in diagnostics]
    record["d_semistable"] = ok
    record["normal_class_residual"] = residual.as_lists()
    _emit(record, args)
    return EXIT_OK if not ncconfig.has_errors(diagnostics) else EXIT_FAIL


# ---------------------------------------------------------------------------
# invariants


def _invariants_record(
    fam_id: str | None,
    config: ncconfig.NCConfiguration,
    divisor: construction.CollectiveDivisor | None,
    want_trace: bool,
) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if divisor is not None:
        _, pre_residual = degeneration.is_d_semistable(config)
        inv = invariants.hodge(config, divisor)
        config_tilde, trace = construction.sequential_blowup(config, divisor)
        _, residual = degeneration.is_d_semistable(config_tilde)
        out["invariants"] = inv.as_dict()
        out["normal_class_residual"] = residual.as_lists()
        out["input_normal_class_residual"] = pre_residual.as_lists()
        if want_trace:
            out["trace"] = trace.as_dict()
        return out
    # Configuration-file route: must already be d-semistable.
    e = invariants.euler_smoothing(config)
    if config.lattice_is_full:
        h11 = invariants.h11_kernel(config)
        methods = {"euler": ["triple-point-sum"], "h11": ["kernel"], "h12": ["derived"]}
    elif config.h2_total is not None:
        h11 = config.h2_total - 2
        methods = {"euler": ["triple-point-sum"], "h11": ["closed-form"], "h12": ["derived"]}
    else:
        raise CliError(
            "configuration declares neither complete lattices nor h2_total; "
            "cannot compute h11",
            EXIT_FAIL,
        )
    pairings = invariants.picard_one_pairings(config)
    inv = invariants.SmoothingInvariants(
        euler=e,
        h11=h11,
        h12=h11 - e // 2,
        h_cubed=pairings.h_cubed,
        h_dot_c2=pairings.h_dot_c2,
        method_tags=tuple((k, tuple(v)) for k, v in methods.items()),
    )
    _, residual = degeneration.is_d_semistable(config)
    out["invariants"] = inv.as_dict()
    out["normal_class_residual"] = residual.as_lists()
    return out


def cmd_invariants(args: argparse.Namespace) -> int:
    config, divisor, provenance = _resolve_source(args)
    if args.family and divisor is None:
        raise CliError("invariants needs --partition with --family", EXIT_PARSE)
    record = _base_record("invariants", provenance)
    try:
        record.update(
            _invariants_record(args.family, config, divisor, args.trace)
        )
    except construction.AdmissibilityError as exc:
        record["diagnostics"] = [d.as_dict() for d in exc.diagnostics]
        print(_error_record("inadmissible collective divisor"), file=sys.stderr)
        _emit(record, args)
        return EXIT_FAIL
    except invariants.NotDSemistable as exc:
        print(_error_record(str(exc)), file=sys.stderr)
        return EXIT_FAIL

    if args.format == "json":
        _emit(record, args)
    elif args.format == "csv":
        star = _star_for(args.family, provenance.get("partition"))
        inv = record["invariants"]
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["family", "partition", "h11", "h12", "euler", "star"])
        writer.writerow(
            [
                args.family or "-",
                provenance.get("partition", "-"),
                inv["h11"],
                inv["h12"],
                inv["euler"],
                "*" if star else "",
            ]
        )
        _emit_text(buf.getvalue().rstrip("\n"), args)
    else:
        inv = record["invariants"]
        lines = [
            f"source: {json.dumps(provenance, sort_keys=True)}",
            f"euler = {inv['euler']}",
            f"h11   = {inv['h11']}",
            f"h12   = {inv['h12']}",
        ]
        if "h_cubed" in inv:
            lines.append(f"H^3   = {inv['h_cubed']}")
            lines.append(f"H.c2  = {inv['h_dot_c2']}")
        if "trace" in record:
            lines.append("trace:")
            for s in record["trace"]["steps"]:
                lines.append(
                    f"  blow up {s['component']} along {s['center']} on {s['surface']}"
                    f" (degree {s['degree']}, euler {s['euler']})"
                )
        _emit_text("\n".join(lines), args)
    return EXIT_OK


def _star_for(fam_id: str | None, partition_text: str | None) -> bool:
    if fam_id is None or partition_text is None:
        return False
    spec = _parse_partition(partition_text).canonical()
    for row in catalog.expected_table(fam_id):
        if row.partition.parts == spec.parts:
            return row.star
    return False


# ---------------------------------------------------------------------------
# table / verify


def _computed_row(fam: catalog.Family, spec: catalog.PartitionSpec) -> dict[str, Any]:
    config, divisor = catalog.instantiate(fam, spec)
    inv = invariants.hodge(config, divisor)
    return {
        "partition": spec.cli_form(),
        "h11": inv.h11,
        "h12": inv.h12,
        "euler": inv.euler,
    }


def _family_rows(fam: catalog.Family) -> list[dict[str, Any]]:
    specs = catalog.enumerate_partitions(fam)
    expected = {r.partition.parts: r for r in catalog.expected_table(fam)}
    rows = _map_ordered(lambda s: _computed_row(fam, s), specs)
    for spec, row in zip(specs, rows):
        exp = expected.get(spec.parts)
        row["star"] = bool(exp.star) if exp else False
        row["family"] = fam.id
    return rows


def cmd_table(args: argparse.Namespace) -> int:
    try:
        fam = catalog.get_family(args.family)
    except catalog.UnknownFamily as exc:
        raise CliError(str(exc), EXIT_PARSE)
    rows = _family_rows(fam)
    if args.format == "json":
        _emit(
            {
                "format_version": OUTPUT_FORMAT_VERSION,
                "command": "table",
                "source": {"catalog": fam.id},
                "rows": rows,
            },
            args,
        )
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["family", "partition", "h11", "h12", "euler", "star"])
        for r in rows:
            writer.writerow(
                [r["family"], r["partition"], r["h11"], r["h12"], r["euler"], "*" if r["star"] else ""]
            )
        _emit_text(buf.getvalue().rstrip("\n"), args)
    else:
        width = max(len(r["partition"]) for r in rows) + 2
        lines = [f"family {fam.id}: {fam.description}"]
        lines.append(f"{'partition':<{width}}{'h11':>5}{'h12':>5}{'euler':>8}  star")
        for r in rows:
            lines.append(
                f"{r['partition']:<{width}}{r['h11']:>5}{r['h12']:>5}{r['euler']:>8}"
                f"  {'*' if r['star'] else ''}"
            )
        _emit_text("\n".join(lines), args)
    return EXIT_OK


def verify_family(fam: catalog.Family) -> tuple[int, int, list[dict[str, Any]]]:
    """Compare computed rows against the reference table.

    Returns (matches, total, mismatches); a row that raises is a mismatch.
    """
    specs = catalog.enumerate_partitions(fam)
    expected = {r.partition.parts: r for r in catalog.expected_table(fam)}
    mismatches: list[dict[str, Any]] = []
    total = len(expected)
    if {s.parts for s in specs} != set(expected):
        mismatches.append(
            {
                "family": fam.id,
                "partition": "-",
                "computed": f"{len(specs)} partitions enumerated",
                "expected": f"{total} reference rows",
            }
        )

    def one(spec: catalog.PartitionSpec) -> dict[str, Any] | None:
        exp = expected.get(spec.parts)
        if exp is None:
            return {
                "family": fam.id,
                "partition": spec.cli_form(),
                "computed": "enumerated",
                "expected": "absent from reference table",
            }
        try:
            config, divisor = catalog.instantiate(fam, spec)
            inv = invariants.hodge(config, divisor)
            computed = (inv.h11, inv.h12)
        except Exception as exc:  # a failing row must count as a mismatch
            return {
                "family": fam.id,
                "partition": spec.cli_form(),
                "computed": f"error: {exc}",
                "expected": f"({exp.h11},{exp.h12})",
            }
        if computed != (exp.h11, exp.h12):
            return {
                "family": fam.id,
                "partition": spec.cli_form(),
                "computed": f"({computed[0]},{computed[1]})",
                "expected": f"({exp.h11},{exp.h12})",
            }
        return None

    for result in _map_ordered(one, specs):
        if result is not None:
            mismatches.append(result)
    matches = total - sum(1 for m in mismatches if m["partition"] != "-")
    return matches, total, mismatches


def cmd_verify(args: argparse.Namespace) -> int:
    if args.family == "all":
        fams = [catalog.get_family(f) for f in catalog.family_ids()]
    else:
        try:
            fams = [catalog.get_family(args.family)]
        except catalog.UnknownFamily as exc:
            raise CliError(str(exc), EXIT_PARSE)
    matched = total = 0
    all_mismatches: list[dict[str, Any]] = []
    for fam in fams:
        m, t, mismatches = verify_family(fam)
        matched += m
        total += t
        all_mismatches.extend(mismatches)
    for mm in all_mismatches:
        print(
            f"MISMATCH {mm['family']} {mm['partition']}: computed {mm['computed']}, "
            f"expected {mm['expected']}"
        )
    print(f"{matched}/{total} rows match")
    return EXIT_OK if not all_mismatches else EXIT_FAIL


# ---------------------------------------------------------------------------
# catalog


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "list":
        lines = []
        for fam_id in catalog.family_ids():
            fam = catalog.get_family(fam_id)
            n_rows = len(catalog.expected_table(fam))
            lines.append(f"{fam_id:<20} {n_rows:>3} partitions  {fam.description}")
        _emit_text("\n".join(lines), args)
        return EXIT_OK
    # export
    if not args.family:
        raise CliError("catalog export needs --family", EXIT_PARSE)
    try:
        fam = catalog.get_family(args.family)
    except catalog.UnknownFamily as exc:
        raise CliError(str(exc), EXIT_PARSE)
    if args.expected:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["partition", "h11", "h12", "star"])
        for row in catalog.expected_table(fam):
            writer.writerow(
                [row.partition.cli_form(), row.h11, row.h12, "*" if row.star else ""]
            )
        _emit_text(buf.getvalue().rstrip("\n"), args)
    else:
        spec = catalog.PartitionSpec(parts=(fam.total_degree,))
        config, _ = catalog.instantiate(fam, spec)
        _emit_text(ncconfig.config_to_json(config), args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nc3",
        description=(
            "exact invariants of smoothed three-component normal crossing "
            "Calabi-Yau threefolds"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_source(p: argparse.ArgumentParser, with_partition: bool = True) -> None:
        p.add_argument("--family", help="catalog family id")
        p.add_argument("--config", help="path to an ncconfig/1 JSON file")
        if with_partition:
            p.add_argument("--partition", help="e.g. 5 or 1,4 or (1,0),(2,3)")
            p.add_argument(
                "--order",
                help="ordering of the partition parts for the blow-up trace",
            )
        p.add_argument("--out", help="write the payload to a file")

    p_check = sub.add_parser("check", help="validate and report d-semistability")
    add_source(p_check)
    p_check.add_argument(
        "--after-blowup",
        action="store_true",
        help="materialize the blown-up configuration before checking",
    )
    p_check.set_defaults(fn=cmd_check)

    p_inv = sub.add_parser("invariants", help="smoothing invariants for one partition")
    add_source(p_inv)
    p_inv.add_argument("--trace", action="store_true", help="include the blow-up trace")
    p_inv.add_argument(
        "--format", choices=("text", "json", "csv"), default="text"
    )
    p_inv.set_defaults(fn=cmd_invariants)

    p_table = sub.add_parser("table", help="invariants for every partition of a family")
    p_table.add_argument("--family", required=True)
    p_table.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p_table.add_argument("--out")
    p_table.set_defaults(fn=cmd_table)

    p_verify = sub.add_parser("verify", help="diff computed tables against the reference")
    p_verify.add_argument("--family", default="all", help="family id or 'all'")
    p_verify.set_defaults(fn=cmd_verify)

    p_cat = sub.add_parser("catalog", help="list or export built-in families")
    p_cat.add_argument("action", choices=("list", "export"))
    p_cat.add_argument("--family")
    p_cat.add_argument(
        "--expected",
        action="store_true",
        help="export the reference table as CSV instead of the configuration",
    )
    p_cat.add_argument("--out")
    p_cat.set_defaults(fn=cmd_catalog)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(_error_record(str(exc)), file=sys.stderr)
        return exc.exit_code
    except ncconfig.SchemaError as exc:
        print(_error_record(f"schema error: {exc}"), file=sys.stderr)
        return EXIT_PARSE
    except (
        catalog.PartitionError,
        construction.AdmissibilityError,
        invariants.NotDSemistable,
        invariants.PathDisagreement,
    ) as exc:
        print(_error_record(str(exc)), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
