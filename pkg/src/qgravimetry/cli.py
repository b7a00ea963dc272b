"""Command line front end: ``qgravimetry {phase,sens,sweep,crossover}``.

Exit status is 0 on success, 2 for invalid input and 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import sys

from . import analysis
from .geometry import GeometryError, path_times

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _assignment(text: str) -> tuple[str, float]:
    key, sep, raw = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return key.strip(), float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value for {key!r} is not a number: {raw!r}") from None


def _add_set(parser):
    parser.add_argument(
        "--set", dest="params", action="append", type=_assignment, default=[], metavar="NAME=VALUE",
        help="override a parameter (repeatable); e.g. --set t2=0.9 --set L=5000",
    )


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="qgravimetry", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_ArgumentParser)

    ph = sub.add_parser("phase", help="print local times, delta tau, psi and g for a geometry")
    _add_set(ph)

    se = sub.add_parser("sens", help="one-shot Delta g / g for one or more schemes")
    se.add_argument("schemes", nargs="+", metavar="SCHEME", help=f"one of: {', '.join(analysis.SCHEMES)}")
    _add_set(se)

    sw = sub.add_parser("sweep", help="evaluate a sweep file or preset and write CSV")
    src = sw.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(analysis.PRESETS))
    src.add_argument("--config", help="sweep description file")
    sw.add_argument("--out", help="CSV destination (default: stdout)")
    sw.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    cx = sub.add_parser("crossover", help="find where two schemes swap order")
    cx.add_argument("scheme_a")
    cx.add_argument("scheme_b")
    cx.add_argument("--param", required=True, help="parameter to vary")
    cx.add_argument("--min", type=float, required=True)
    cx.add_argument("--max", type=float, required=True)
    _add_set(cx)
    return p


def _cmd_phase(args) -> None:
    params = analysis.merge_params(dict(args.params))
    geometry = analysis.geometry_from(params)
    times = path_times(geometry)
    rows = [
        ("r_s [m]", geometry.r_s),
        ("g [m/s^2]", geometry.g),
        ("R1 - R2 [m]", times.R1 - geometry.R2),
        ("tau_signal [s]", times.tau_signal),
        ("tau_reference [s]", times.tau_reference),
        ("delta_tau [s]", times.delta_tau),
        ("delta_tau_exact [s]", times.delta_tau_exact),
        ("psi [rad]", times.psi),
        ("psi_closed_form [rad]", times.psi_closed_form),
    ]
    for name, value in rows:
        print(f"{name:<24}{value:.10e}")


def _cmd_sens(args) -> None:
    params = dict(args.params)
    for scheme in args.schemes:
        result = analysis.evaluate(scheme, params)
        print(f"{scheme:<28}{result.value:.10e}  n_sig={result.n_sig:.6e}  method={result.method.value}")


def _cmd_sweep(args) -> None:
    spec = analysis.PRESETS[args.preset] if args.preset else analysis.load_sweep_spec(args.config)
    rows = analysis.run_sweep(spec, workers=args.workers)
    analysis.emit_csv(rows, args.out if args.out else sys.stdout)


def _cmd_crossover(args) -> None:
    result = analysis.find_crossover(
        args.scheme_a, args.scheme_b, args.param, dict(args.params), (args.min, args.max)
    )
    print(f"{result.param} = {result.value:.9f}")
    if result.param in ("t1", "t2", "T"):
        # amplitude transmittance; the loss can also be quoted in intensity
        print(f"{result.param}^2 = {result.value**2:.9f}")
        print(f"1 - {result.param} = {1 - result.value:.9f}")
    print(f"below: {result.better_below} is better")
    print(f"above: {result.better_above} is better")


COMMANDS = {"phase": _cmd_phase, "sens": _cmd_sens, "sweep": _cmd_sweep, "crossover": _cmd_crossover}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.cmd](args)
    except (analysis.SpecError, analysis.NoSignChangeError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
