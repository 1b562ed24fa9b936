"""Batch command-line front end: generate, spectrum, verify, partition.

Exit codes: 0 on success (and all checks passing), 1 on a failed check or
internal error, 2 on usage errors.  CSV uses '.' decimals and no locale;
exact rationals are serialized as "p/q" strings.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
from dataclasses import dataclass

from . import farey, ferro, spectral, zeta
from .report import all_passed


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation parameters for one subcommand."""

    command: str
    level: int
    mode: str | None = None
    fmt: str = "csv"
    tolerance: float = 1e-12
    s: complex | None = None
    t: float | None = None
    out: str | None = None
    max_level: int | None = None
    seed: int = ferro.DEFAULT_SEED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fareyspin",
        description="Modified Farey rows, their Walsh-Hadamard spectra, the full "
        "verification suite, and zeta-linked partition sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format):
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--out", metavar="PATH", default=None, help="output file (default: stdout)")
        p.add_argument("--max-level", type=int, default=None, help="row materialization cap override")

    p = sub.add_parser("generate", help="emit the extended level-k row of fractions")
    p.add_argument("-k", "--level", type=int, required=True)
    common(p, "csv")

    p = sub.add_parser("spectrum", help="emit the full level-k interaction spectrum")
    p.add_argument("-k", "--level", type=int, required=True)
    p.add_argument(
        "--mode",
        choices=("exact", "float"),
        default=None,
        help=f"default: exact for k <= {spectral.K_EXACT}, float above",
    )
    common(p, "csv")

    p = sub.add_parser("verify", help="run all checks for k = 1..LEVEL; exit 0 iff all pass")
    p.add_argument("-k", "--level", type=int, default=12, help="top level of the sweep")
    p.add_argument("--tolerance", type=float, default=1e-12, help="float-mode tolerance (ignored in exact mode)")
    p.add_argument("--seed", type=int, default=ferro.DEFAULT_SEED, help="seed for the randomized identity trials")
    common(p, "json")

    p = sub.add_parser("partition", help="evaluate the level-k partition sum Z_k(s, t)")
    p.add_argument("-k", "--level", type=int, default=20)
    p.add_argument("--s-re", type=float, required=True, help="Re(s); must exceed 2")
    p.add_argument("--s-im", type=float, default=0.0)
    p.add_argument("--t", type=float, default=0.0, help="phase parameter in [0, 1]")
    common(p, "json")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.level < 0:
        raise ValueError("level must be nonnegative")
    mode = getattr(args, "mode", None)
    if mode is None and args.command == "spectrum":
        mode = "exact" if args.level <= spectral.K_EXACT else "float"
    if mode == "exact" and args.level > spectral.K_EXACT:
        raise ValueError(
            f"exact mode supports k <= {spectral.K_EXACT}; rerun with --mode float"
        )
    s = None
    if args.command == "partition":
        s = complex(args.s_re, args.s_im)
        if s.real <= 2:
            raise ValueError("partition requires Re(s) > 2")
        if not 0.0 <= args.t <= 1.0:
            raise ValueError("t must lie in [0, 1]")
    if args.command == "verify" and args.level < 1:
        raise ValueError("verify needs level >= 1")
    return RunConfig(
        command=args.command,
        level=args.level,
        mode=mode,
        fmt=args.format,
        tolerance=getattr(args, "tolerance", 1e-12),
        s=s,
        t=getattr(args, "t", None),
        out=args.out,
        max_level=args.max_level,
        seed=getattr(args, "seed", ferro.DEFAULT_SEED),
    )


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_generate(config: RunConfig, stream) -> int:
    row = farey.extended_row(config.level, config.max_level)
    if config.fmt == "csv":
        farey.write_row_csv(row, stream)
    else:
        records = [
            {"index": i, "numerator": n, "denominator": d, "value": n / d}
            for i, (n, d) in enumerate(
                zip(row.numerators.tolist(), row.denominators.tolist())
            )
        ]
        json.dump(records, stream, indent=2)
        stream.write("\n")
    return 0


def cmd_spectrum(config: RunConfig, stream) -> int:
    spectrum = spectral.interaction(config.level, config.mode, max_level=config.max_level)
    if config.fmt == "csv":
        spectral.write_spectrum_csv(spectrum, stream)
        return 0
    k = spectrum.level
    records = []
    for i in range(len(spectrum)):
        v = spectrum.values[i]
        records.append(
            {
                "tau_index": i,
                "tau_bits": format(i, f"0{max(k, 1)}b"),
                "j_value": f"{v.numerator}/{v.denominator}" if spectrum.mode == "exact" else float(v),
                "decay_bound": None if i == 0 else 2.0 ** -spectral.max_support(i, k),
            }
        )
    json.dump(records, stream, indent=2)
    stream.write("\n")
    return 0


def cmd_verify(config: RunConfig, stream) -> int:
    reports = ferro.verify_suite(
        config.level,
        tol=config.tolerance,
        seed=config.seed,
        max_level=config.max_level,
    )
    if config.fmt == "json":
        json.dump([r.to_dict() for r in reports], stream, indent=2)
        stream.write("\n")
    else:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["name", "level", "pass", "margin", "witness"])
        for r in reports:
            d = r.to_dict()
            writer.writerow([d["name"], d["level"], d["pass"], d["margin"], d["witness"]])
    return 0 if all_passed(reports) else 1


def cmd_partition(config: RunConfig, stream) -> int:
    result = zeta.partition_sum(config.level, config.s, config.t, config.max_level)
    reference = None
    if config.t == 1.0:
        reference = 1.0 / zeta.zeta_oracle(config.s)
    elif config.t == 0.0:
        reference = zeta.zeta_oracle(config.s - 1) / zeta.zeta_oracle(config.s)
    record = {
        "k": result.level,
        "s_re": result.s.real,
        "s_im": result.s.imag,
        "t": result.t,
        "z_re": result.value.real,
        "z_im": result.value.imag,
        "tail_bound": result.tail_bound,
        "reference_value": None if reference is None else [reference.real, reference.imag],
        "discrepancy": None if reference is None else abs(result.value - reference),
    }
    if config.fmt == "json":
        json.dump(record, stream, indent=2)
        stream.write("\n")
    else:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(list(record))
        writer.writerow(["" if v is None else v for v in record.values()])
    return 0


_HANDLERS = {
    "generate": cmd_generate,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "partition": cmd_partition,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))  # exits with code 2
    try:
        with _output(config.out) as stream:
            return _HANDLERS[config.command](config, stream)
    except (ValueError, OSError) as exc:
        print(f"fareyspin: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
