"""Command-line front end.

Subcommands: classify | selmer | rank | repr | scan | descent.  Output is
JSON (array of objects, fixed key order), RFC-4180 CSV, or an aligned text
table; identical invocations produce byte-identical output.  Records carry
spec_version 1.  Square classes serialize both as sorted signed integers
(with p substituted numerically) and as a symbolic companion column using
"p" notation for comparison against the case tables.

Exit codes: 0 ok, 1 internal inconsistency detected (engine disagrees with
a closed form; the offending record is still emitted), 2 usage error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import multiprocessing
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional

from .arith import is_prime
from .descent import PSI, PSIBAR, CurveModel, rank_bounds, selmer
from .family import (
    KIND_3P,
    KIND_P,
    classify,
    closed_form_selmer_psi,
    closed_form_selmer_psibar,
    find_repr,
    theorem_bound,
    verify_prime,
)

SPEC_VERSION = 1

OutputRecord = dict


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: Optional[int] = None
    range_max: Optional[int] = None
    a: Optional[int] = None
    b: Optional[int] = None
    height_bound: int = 2000
    output_format: str = "text"
    output_path: Optional[str] = None
    parallelism: int = 1


# value parsers / serializers per column
_INT_KEYS = {
    "spec_version",
    "p",
    "a",
    "b",
    "mod24",
    "dim_selmer_psibar",
    "dim_selmer_psi",
    "dim_im_alpha",
    "dim_im_alphabar",
    "lower",
    "upper",
}
_OPT_INT_KEYS = {"quartic2", "repr_3p_a", "repr_3p_b", "repr_p_a", "repr_p_b"}
_BOOL_KEYS = {"consistent"}

# fixed column order per command (also used for header-only output)
_SCHEMAS = {
    "classify": ("spec_version", "p", "mod24", "quartic2", "theorem_bound"),
    "selmer": (
        "spec_version",
        "p",
        "closed_psibar",
        "closed_psi",
        "engine_psibar",
        "engine_psi",
        "psibar_symbolic",
        "psi_symbolic",
        "consistent",
    ),
    "rank": (
        "spec_version",
        "p",
        "mod24",
        "quartic2",
        "dim_selmer_psibar",
        "dim_selmer_psi",
        "dim_im_alpha",
        "dim_im_alphabar",
        "lower",
        "upper",
        "theorem_bound",
        "proposition",
        "consistent",
    ),
    "repr": ("spec_version", "p", "repr_3p_a", "repr_3p_b", "repr_p_a", "repr_p_b"),
    "scan": (
        "spec_version",
        "p",
        "mod24",
        "quartic2",
        "dim_selmer_psibar",
        "dim_selmer_psi",
        "dim_im_alpha",
        "dim_im_alphabar",
        "lower",
        "upper",
        "theorem_bound",
        "proposition",
        "selmer_psibar",
        "selmer_psi",
        "selmer_psibar_symbolic",
        "selmer_psi_symbolic",
        "repr_3p_a",
        "repr_3p_b",
        "repr_p_a",
        "repr_p_b",
        "consistent",
    ),
    "descent": (
        "spec_version",
        "a",
        "b",
        "dim_selmer_psibar",
        "dim_selmer_psi",
        "dim_im_alpha",
        "dim_im_alphabar",
        "lower",
        "upper",
    ),
}


def _prime_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 2 or not is_prime(value):
        raise argparse.ArgumentTypeError(f"{value} is not prime")
    return value


def _positive_arg(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isodescent",
        description="2-descent via 2-isogeny for y^2 = x^3 + 18p^2x",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, height=True):
        sp.add_argument("--format", choices=("json", "csv", "text"), default="text")
        sp.add_argument("--out", metavar="PATH", default=None)
        if height:
            sp.add_argument("--height-bound", type=_positive_arg, default=2000)

    sp = sub.add_parser("classify", help="residue class, quartic character, rank ceiling")
    sp.add_argument("--p", type=_prime_arg, required=True)
    add_common(sp, height=False)

    sp = sub.add_parser("selmer", help="closed-form and engine Selmer groups")
    sp.add_argument("--p", type=_prime_arg, required=True)
    add_common(sp, height=False)

    sp = sub.add_parser("rank", help="rank bounds with proposition statements")
    sp.add_argument("--p", type=_prime_arg, required=True)
    add_common(sp)

    sp = sub.add_parser("repr", help="fourth-power representations of 3p and p")
    sp.add_argument("--p", type=_prime_arg, required=True)
    add_common(sp, height=False)

    sp = sub.add_parser("scan", help="full report for every prime up to --max")
    sp.add_argument("--max", dest="range_max", type=_positive_arg, required=True)
    sp.add_argument("--jobs", type=_positive_arg, default=os.cpu_count() or 1)
    add_common(sp)

    sp = sub.add_parser("descent", help="rank bounds for an arbitrary curve (a, b)")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    add_common(sp)
    return parser


def parse_args(argv: list[str]) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        p=getattr(ns, "p", None),
        range_max=getattr(ns, "range_max", None),
        a=getattr(ns, "a", None),
        b=getattr(ns, "b", None),
        height_bound=getattr(ns, "height_bound", 2000),
        output_format=ns.format,
        output_path=ns.out,
        parallelism=getattr(ns, "jobs", 1),
    )


# ---------------------------------------------------------------------------
# record construction


def _symbolic(c: int, p: int) -> str:
    if p > 3 and c % p == 0:
        s = c // p
        head = {1: "", -1: "-"}.get(s, str(s))
        return f"{head}p"
    return str(c)


def _classes_numeric(classes) -> str:
    return " ".join(str(c) for c in sorted(classes))


def _classes_symbolic(classes, p: int) -> str:
    return " ".join(_symbolic(c, p) for c in sorted(classes))


def _classify_record(p: int) -> OutputRecord:
    cls = classify(p)
    return {
        "spec_version": SPEC_VERSION,
        "p": p,
        "mod24": cls.residue_mod_24,
        "quartic2": cls.quartic2,
        "theorem_bound": str(theorem_bound(p)),
    }


def _selmer_record(p: int) -> OutputRecord:
    from .family import curve_for_prime

    E = curve_for_prime(p)
    closed_bar = closed_form_selmer_psibar(p)
    closed_psi = closed_form_selmer_psi(p)
    engine_bar = selmer(E, PSIBAR)
    engine_psi = selmer(E, PSI)
    consistent = (
        closed_bar.classes == engine_bar.classes and closed_psi.classes == engine_psi.classes
    )
    return {
        "spec_version": SPEC_VERSION,
        "p": p,
        "closed_psibar": _classes_numeric(closed_bar.classes),
        "closed_psi": _classes_numeric(closed_psi.classes),
        "engine_psibar": _classes_numeric(engine_bar.classes),
        "engine_psi": _classes_numeric(engine_psi.classes),
        "psibar_symbolic": _classes_symbolic(engine_bar.classes, p),
        "psi_symbolic": _classes_symbolic(engine_psi.classes, p),
        "consistent": consistent,
    }


def _rank_record(p: int, height_bound: int) -> OutputRecord:
    report = verify_prime(p, height_bound)
    rb = report.rank_bounds
    return {
        "spec_version": SPEC_VERSION,
        "p": p,
        "mod24": report.prime_class.residue_mod_24,
        "quartic2": report.prime_class.quartic2,
        "dim_selmer_psibar": rb.dim_selmer_psibar,
        "dim_selmer_psi": rb.dim_selmer_psi,
        "dim_im_alpha": rb.dim_im_alpha,
        "dim_im_alphabar": rb.dim_im_alphabar,
        "lower": rb.lower,
        "upper": rb.upper,
        "theorem_bound": str(report.theorem_bound),
        "proposition": str(report.proposition) if report.proposition else "",
        "consistent": report.consistent,
    }


def _repr_record(p: int) -> OutputRecord:
    w3p = find_repr(3 * p, 2)
    wp = find_repr(p, 18)
    return {
        "spec_version": SPEC_VERSION,
        "p": p,
        "repr_3p_a": w3p.a if w3p else None,
        "repr_3p_b": w3p.b if w3p else None,
        "repr_p_a": wp.a if wp else None,
        "repr_p_b": wp.b if wp else None,
    }


def _scan_record(args: tuple[int, int]) -> OutputRecord:
    p, height_bound = args
    report = verify_prime(p, height_bound)
    rb = report.rank_bounds
    by_kind = {w.kind: w for w in report.witnesses}
    w3p = by_kind.get(KIND_3P)
    wp = by_kind.get(KIND_P)
    return {
        "spec_version": SPEC_VERSION,
        "p": p,
        "mod24": report.prime_class.residue_mod_24,
        "quartic2": report.prime_class.quartic2,
        "dim_selmer_psibar": rb.dim_selmer_psibar,
        "dim_selmer_psi": rb.dim_selmer_psi,
        "dim_im_alpha": rb.dim_im_alpha,
        "dim_im_alphabar": rb.dim_im_alphabar,
        "lower": rb.lower,
        "upper": rb.upper,
        "theorem_bound": str(report.theorem_bound),
        "proposition": str(report.proposition) if report.proposition else "",
        "selmer_psibar": _classes_numeric(report.engine_psibar.classes),
        "selmer_psi": _classes_numeric(report.engine_psi.classes),
        "selmer_psibar_symbolic": _classes_symbolic(report.engine_psibar.classes, p),
        "selmer_psi_symbolic": _classes_symbolic(report.engine_psi.classes, p),
        "repr_3p_a": w3p.a if w3p else None,
        "repr_3p_b": w3p.b if w3p else None,
        "repr_p_a": wp.a if wp else None,
        "repr_p_b": wp.b if wp else None,
        "consistent": report.consistent,
    }


def _descent_record(a: int, b: int, height_bound: int) -> OutputRecord:
    rb = rank_bounds(CurveModel(a, b), height_bound)
    return {
        "spec_version": SPEC_VERSION,
        "a": a,
        "b": b,
        "dim_selmer_psibar": rb.dim_selmer_psibar,
        "dim_selmer_psi": rb.dim_selmer_psi,
        "dim_im_alpha": rb.dim_im_alpha,
        "dim_im_alphabar": rb.dim_im_alphabar,
        "lower": rb.lower,
        "upper": rb.upper,
    }


def execute(config: RunConfig) -> tuple[list[OutputRecord], int]:
    """Run the configured command; exit code 1 flags any inconsistency."""
    if config.command == "classify":
        records = [_classify_record(config.p)]
    elif config.command == "selmer":
        records = [_selmer_record(config.p)]
    elif config.command == "rank":
        records = [_rank_record(config.p, config.height_bound)]
    elif config.command == "repr":
        records = [_repr_record(config.p)]
    elif config.command == "scan":
        from .arith import primes_up_to

        primes = primes_up_to(config.range_max) if config.range_max >= 2 else []
        work = [(p, config.height_bound) for p in primes]
        if config.parallelism > 1 and len(work) > 1:
            with multiprocessing.Pool(config.parallelism) as pool:
                records = pool.map(_scan_record, work)
        else:
            records = [_scan_record(item) for item in work]
        records.sort(key=lambda r: r["p"])
    elif config.command == "descent":
        records = [_descent_record(config.a, config.b, config.height_bound)]
    else:
        raise ValueError(f"unknown command {config.command!r}")
    bad = any(r.get("consistent") is False for r in records)
    return records, (1 if bad else 0)


# ---------------------------------------------------------------------------
# serialization


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def emit(
    records: list[OutputRecord],
    output_format: str,
    path: Optional[str] = None,
    columns: Optional[tuple[str, ...]] = None,
) -> bytes:
    """Serialize records; write-then-rename when a path is given.

    columns supplies the header when the record list is empty.
    """
    header = tuple(records[0].keys()) if records else (columns or ())
    if output_format == "json":
        data = (json.dumps(records, indent=2) + "\n").encode()
    elif output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        if header:
            writer.writerow(header)
        for rec in records:
            writer.writerow(_csv_cell(rec.get(k)) for k in header)
        data = buf.getvalue().encode()
    elif output_format == "text":
        data = _text_table(records, header).encode()
    else:
        raise ValueError(f"unknown format {output_format!r}")
    if path is not None:
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".isodescent-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
    return data


def _text_table(records: list[OutputRecord], header: tuple[str, ...]) -> str:
    if not header:
        return "(no records)\n"
    rows = [[_csv_cell(rec.get(k)) for k in header] for rec in records]
    widths = [max(len(k), *(len(row[i]) for row in rows)) if rows else len(k) for i, k in enumerate(header)]
    lines = ["  ".join(k.ljust(widths[i]) for i, k in enumerate(header)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def parse_records_csv(data: bytes) -> list[OutputRecord]:
    """Inverse of emit(..., "csv"): restores the documented column types."""
    reader = csv.reader(io.StringIO(data.decode()))
    rows = list(reader)
    if not rows:
        return []
    header = rows[0]
    out = []
    for row in rows[1:]:
        rec: OutputRecord = {}
        for key, cell in zip(header, row):
            if key in _BOOL_KEYS:
                rec[key] = cell == "true"
            elif key in _INT_KEYS:
                rec[key] = int(cell)
            elif key in _OPT_INT_KEYS:
                rec[key] = int(cell) if cell else None
            else:
                rec[key] = cell
        out.append(rec)
    return out


def main(argv: Optional[list[str]] = None) -> int:
    config = parse_args(sys.argv[1:] if argv is None else argv)
    records, code = execute(config)
    try:
        data = emit(records, config.output_format, config.output_path, _SCHEMAS[config.command])
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3
    if config.output_path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
