"""Command-line front end.

Subcommands: ``coeffs`` prints cavity response amplitudes, ``run`` executes
one protocol with optional stage trace, ``sweep`` writes fidelity sweeps to
CSV or JSON, ``verify`` runs the ideal-limit oracle suite.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 invalid
physical input, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, protocols, verify
from .cavity import IDEAL, CavityParams, coefficients
from .statevec import DIRECTION, LINEAR, POLARIZATION, SPIN, StateVector

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_BAD_INPUT = 3
EXIT_IO = 4

_SPIN_NORM_SLACK = 1e-6


def _complex_pair(text: str) -> np.ndarray:
    """Parse 're:im,re:im' into a two-component complex vector."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two components, got {text!r}")
    comps = []
    for part in parts:
        re_im = part.split(":")
        if len(re_im) != 2:
            raise argparse.ArgumentTypeError(f"component {part!r} is not re:im")
        try:
            comps.append(float(re_im[0]) + 1j * float(re_im[1]))
        except ValueError:
            raise argparse.ArgumentTypeError(f"cannot parse component {part!r}") from None
    return np.array(comps)


def _float_list(text: str) -> list[float]:
    """Comma list ('0,0.01,0.05') or inclusive range 'min/max/steps'."""
    try:
        if "/" in text:
            lo, hi, steps = text.split("/")
            n = int(steps)
            if n < 1:
                raise ValueError
            return [float(x) for x in np.linspace(float(lo), float(hi), n)]
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse value list {text!r}") from None


def _format_complex(z: complex) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _format_amplitude(z: complex) -> str:
    # adding 0.0 folds IEEE negative zeros
    return f"{z.real + 0.0:.9g}:{z.imag + 0.0:.9g}"


_KET = {
    (SPIN, 0): "u",
    (SPIN, 1): "d",
    (POLARIZATION, 0): "R",
    (POLARIZATION, 1): "L",
    (DIRECTION, 0): "^",
    (DIRECTION, 1): "v",
}


def _basis_token(state: StateVector, index: int) -> str:
    bits = format(index, f"0{state.n_subsystems}b")
    chars = []
    for label, bit in zip(state.subsystems, bits):
        key = (label.kind, int(bit))
        ch = _KET[key]
        if label.kind == POLARIZATION and label.frame == LINEAR:
            ch = "H" if ch == "R" else "V"
        chars.append(ch)
    return "|" + "".join(chars) + ">"


def _print_state(state: StateVector, indent: str = "    ") -> None:
    for i, amp in enumerate(state.amplitudes):
        if abs(amp) > 1e-12:
            print(f"{indent}{_basis_token(state, i)} {_format_amplitude(amp)}")


def _add_cavity_flags(p: argparse.ArgumentParser, with_defaults: bool) -> None:
    d = (lambda v: v) if with_defaults else (lambda v: None)
    p.add_argument("--g", type=float, default=d(1.0), help="coupling strength, units of kappa")
    p.add_argument("--kappa-s", type=float, default=d(0.0), help="side-leakage rate, units of kappa")
    p.add_argument("--gamma", type=float, default=d(0.1), help="dipole decay rate, units of kappa")
    p.add_argument("--detuning", type=float, default=d(0.0), help="probe detuning, units of kappa")


def _params_from(args, defaults=(1.0, 0.0, 0.1, 0.0)) -> CavityParams:
    g, ks, gm, dt = defaults
    return CavityParams(
        g=args.g if args.g is not None else g,
        kappa_s=args.kappa_s if args.kappa_s is not None else ks,
        gamma=args.gamma if args.gamma is not None else gm,
        omega_minus_omega0=args.detuning if args.detuning is not None else dt,
    )


def cmd_coeffs(args) -> int:
    c = coefficients(_params_from(args))
    print(f"r  = {_format_complex(c.r)}")
    print(f"t  = {_format_complex(c.t)}")
    print(f"r0 = {_format_complex(c.r0)}")
    print(f"t0 = {_format_complex(c.t0)}")
    print(f"|r|^2+|t|^2   = {abs(c.r) ** 2 + abs(c.t) ** 2:.6g}")
    print(f"|r0|^2+|t0|^2 = {abs(c.r0) ** 2 + abs(c.t0) ** 2:.6g}")
    return EXIT_OK


def _normalize_spin(vec: np.ndarray, who: str) -> np.ndarray:
    n = float(np.linalg.norm(vec))
    if abs(n - 1.0) <= 1e-12:
        return vec
    if abs(n - 1.0) <= _SPIN_NORM_SLACK:
        print(f"warning: {who} renormalized (norm was {n:.9g})", file=sys.stderr)
        return vec / n
    raise ValueError(f"{who} is not normalizable (norm {n:.9g})")


def cmd_run(args) -> int:
    try:
        spin1 = _normalize_spin(args.spin1, "spin 1")
        spin2 = _normalize_spin(args.spin2, "spin 2")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.ideal:
        for flag in ("g", "kappa_s", "gamma", "detuning"):
            if getattr(args, flag) is not None:
                print("error: --ideal conflicts with cavity flags", file=sys.stderr)
                return EXIT_USAGE
        coeffs = IDEAL
    else:
        coeffs = coefficients(_params_from(args))
    outcomes, trace, efficiency = protocols.run_protocol(
        args.protocol, spin1, spin2, coeffs
    )
    if args.trace:
        for entry in trace.entries:
            tag = f" [{entry.label}]" if entry.label else ""
            print(f"stage {entry.name}{tag}:")
            _print_state(entry.state)
        print()
    print("outcome  raw_prob      cond_prob     corrected spin state (uu,ud,du,dd)  correction")
    for o in outcomes:
        amps = ", ".join(_format_amplitude(z) for z in o.spin_state.amplitudes)
        corr = f"{o.correction[0]} (x) {o.correction[1]}"
        print(
            f"{o.pattern:<8} {o.raw_probability:<13.9g} "
            f"{o.conditioned_probability:<13.9g} {amps}  {corr}"
        )
    print(f"efficiency = {efficiency:.9g}")
    return EXIT_OK


def _record_row(rec: analysis.SweepRecord) -> list[str]:
    row = []
    for field in analysis.FIELDS:
        value = getattr(rec, field)
        row.append(f"{value:.9g}" if isinstance(value, float) else str(value))
    return row


def cmd_sweep(args) -> int:
    if args.g_steps < 1:
        print("error: --g-steps must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.samples < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.seed < 0:
        print("error: --seed must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    g_values = [float(x) for x in np.linspace(args.g_min, args.g_max, args.g_steps)]
    records = analysis.sweep(
        args.protocol,
        g_values,
        args.kappa_s,
        gamma_values=[args.gamma],
        detuning_values=[args.detuning],
        n_samples=args.samples,
        seed=args.seed,
    )
    rows = [_record_row(r) for r in records]
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            if args.format == "csv":
                fh.write(",".join(analysis.FIELDS) + "\n")
                for row in rows:
                    fh.write(",".join(row) + "\n")
            else:
                payload = [
                    {
                        field: (cell if field == "protocol" else
                                int(cell) if field in ("n_samples", "seed") else float(cell))
                        for field, cell in zip(analysis.FIELDS, row)
                    }
                    for row in rows
                ]
                json.dump(payload, fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_checks(args.protocol)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name}: {status} ({r.detail})")
        failed += not r.passed
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincavity",
        description="Heralded two-spin gate simulator for dot-cavity units.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="print cavity response amplitudes")
    _add_cavity_flags(p, with_defaults=True)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("run", help="run one protocol instance")
    p.add_argument("--protocol", choices=protocols.PROTOCOLS, required=True)
    p.add_argument("--spin1", type=_complex_pair, required=True,
                   help="spin 1 amplitudes as re:im,re:im")
    p.add_argument("--spin2", type=_complex_pair, required=True,
                   help="spin 2 amplitudes as re:im,re:im")
    p.add_argument("--ideal", action="store_true", help="use the ideal scattering limit")
    p.add_argument("--trace", action="store_true", help="print the stage-by-stage states")
    _add_cavity_flags(p, with_defaults=False)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sweep cavity parameters to CSV/JSON")
    p.add_argument("--protocol", choices=protocols.PROTOCOLS, required=True)
    p.add_argument("--g-min", type=float, required=True)
    p.add_argument("--g-max", type=float, required=True)
    p.add_argument("--g-steps", type=int, required=True)
    p.add_argument("--kappa-s", type=_float_list, default=[0.0],
                   help="comma list or min/max/steps")
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--detuning", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the ideal-limit oracle checks")
    p.add_argument("--protocol", choices=(*protocols.PROTOCOLS, "all"), default="all")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
