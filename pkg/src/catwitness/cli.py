"""Command-line front end emitting reproducible CSV/JSON artifacts.

Subcommands: chi, ncregion, decay, ptmin, witness, ramsey, prepare.
Exit codes: 0 success, 2 usage error, 3 numeric/consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import entanglement, nonclassicality, oracle, ramsey, states

VERIFY_TOL = 1e-8


class UsageError(Exception):
    pass


class ConsistencyError(Exception):
    pass


_SCHEMA_HINT = ('state JSON schema: {"kind": "cat"|"fock"|"thermal"|'
                '"coherent_superposition"|"mixture"|"decohered"|'
                '"pair_superposition"|"product", ...}, complex numbers as '
                '[re, im]; shorthands: vac, coh:re[,im], fock:n, thermal:nth, '
                'cat:xi0,theta, entcat:xi0,+|-')


def parse_state(text: str):
    """Parse a --state argument: JSON object or inline shorthand."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return states.state_from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad state JSON: {exc}; {_SCHEMA_HINT}") from exc
    try:
        return _parse_shorthand(text)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad state {text!r}: {exc}; {_SCHEMA_HINT}") from exc


def _parse_shorthand(text: str):
    if text == "vac":
        # as a one-term superposition so conditional states stay closed-form
        return states.CoherentSuperposition(((1.0, 0.0),))
    kind, _, rest = text.partition(":")
    args = rest.split(",") if rest else []
    if kind == "coh":
        re = float(args[0])
        im = float(args[1]) if len(args) > 1 else 0.0
        return states.CoherentSuperposition(((1.0, complex(re, im)),))
    if kind == "fock":
        return states.FockState(int(args[0]))
    if kind == "thermal":
        return states.ThermalState(float(args[0]))
    if kind == "cat":
        theta = float(args[1]) if len(args) > 1 else 0.0
        return states.cat_state(float(args[0]), theta)
    if kind == "entcat":
        sign = +1 if (len(args) < 2 or args[1] == "+") else -1
        return states.entangled_cat(float(args[0]), sign)
    raise ValueError(f"unknown shorthand kind {kind!r}")


def parse_grid(text: str) -> nonclassicality.GridSpec:
    """Parse a --grid argument "min:max:step[,min:max:step]"."""
    axes = []
    for part in text.split(","):
        pieces = part.split(":")
        if len(pieces) != 3:
            raise UsageError(f"bad grid axis {part!r}, expected min:max:step")
        try:
            axes.append(tuple(float(p) for p in pieces))
        except ValueError as exc:
            raise UsageError(f"bad grid axis {part!r}: {exc}") from exc
    try:
        return nonclassicality.GridSpec(tuple(axes))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _cjson(z: complex) -> list[float]:
    return [z.real, z.imag]


def _write(args, text: str):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pmap(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _alpha_list(args):
    if args.alpha:
        out = []
        for text in args.alpha:
            re, _, im = text.partition("/")
            out.append(complex(float(re), float(im) if im else 0.0))
        return out
    if args.grid:
        grid = parse_grid(args.grid)
        ax1 = grid.axis_values(0)
        ax2 = grid.axis_values(1) if len(grid.axes) == 2 else np.array([0.0])
        return [complex(a, b) for a in ax1 for b in ax2]
    raise UsageError("chi needs --alpha or --grid")


def cmd_chi(args) -> int:
    state = parse_state(args.state)
    if not isinstance(state, states.SingleModeState):
        raise UsageError("chi needs a single-mode state")
    alphas = _alpha_list(args)

    def row(alpha):
        c = state.chi(alpha)
        cn = state.chi_normal(alpha)
        cells = [alpha.real, alpha.imag, c.real, c.imag, cn.real, cn.imag]
        if args.verify:
            delta = abs(c - oracle.oracle_chi(state, alpha))
            cells.append(delta)
            if delta > VERIFY_TOL:
                raise ConsistencyError(
                    f"oracle discrepancy {delta:g} at alpha={alpha}")
        return cells

    rows = _pmap(row, alphas, args.threads)
    header = "alpha_re,alpha_im,chi_re,chi_im,chiN_re,chiN_im"
    if args.verify:
        header += ",oracle_delta"
    lines = [header] + [",".join(_fmt(c) for c in cells) for cells in rows]
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_ncregion(args) -> int:
    state = parse_state(args.state)
    if not isinstance(state, states.SingleModeState):
        raise UsageError("ncregion needs a single-mode state")
    grid = parse_grid(args.grid)
    scan = nonclassicality.region_scan(state, grid, args.certificate,
                                       args.threshold)
    _write(args, scan.to_csv())
    return 0


def cmd_decay(args) -> int:
    state = parse_state(args.state)
    if not isinstance(state, states.SingleModeState):
        raise UsageError("decay needs a single-mode state")
    if not args.alpha:
        raise UsageError("decay needs --alpha")
    alpha = _alpha_list(args)[0]
    grid = parse_grid(args.grid)
    ts = grid.axis_values(0)
    values = [abs(states.decohere(state, t, args.nth).chi_normal(alpha))
              for t in ts]
    for prev, cur in zip(values, values[1:]):
        if cur > prev + 1e-12:
            print("warning: |chiN| is not monotone on this grid",
                  file=sys.stderr)
            break
    lines = ["gamma_t,absChiN"]
    lines += [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(ts, values)]
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_ptmin(args) -> int:
    grid = parse_grid(args.grid)
    if len(grid.axes) != 2:
        raise UsageError("ptmin needs a 2-axis grid (xi0, eps)")
    xs, es = grid.axis_values(0), grid.axis_values(1)
    cells = [(x, e) for x in xs for e in es]

    def cell(point):
        xi0, eps = point
        if args.product:
            state = states.ProductState(states.VACUUM, states.VACUUM)
        else:
            state = states.entangled_cat(xi0, +1)
        return entanglement.ppt_min_eig(
            state, entanglement.standard_settings(xi0, eps))

    values = _pmap(cell, cells, args.threads)
    lines = ["xi0,eps,lambda_min"]
    lines += [f"{_fmt(x)},{_fmt(e)},{_fmt(v)}"
              for (x, e), v in zip(cells, values)]
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_witness(args) -> int:
    grid = parse_grid(args.grid)
    xs = grid.axis_values(0)

    def cell(xi0):
        wd = entanglement.paper_witness(xi0, args.eps, args.w)
        if args.product:
            state = states.ProductState(states.VACUUM, states.VACUUM)
        else:
            state = states.entangled_cat(xi0, +1)
        return entanglement.witness_expectation(state, wd)

    values = _pmap(cell, xs, args.threads)
    lines = ["xi0,expectation"]
    lines += [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(xs, values)]
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_ramsey(args) -> int:
    state = parse_state(args.state)
    if not isinstance(state, states.SingleModeState):
        raise UsageError("ramsey needs a single-mode state")
    alpha = _alpha_list(args)[0] if args.alpha else 0j
    setting = ramsey.RamseySetting(args.phi, alpha)
    p_plus, p_minus = ramsey.outcome_probabilities(state, setting)
    result = {
        "phi": args.phi,
        "alpha": _cjson(alpha),
        "p_plus": p_plus,
        "p_minus": p_minus,
    }
    if args.verify:
        exact = state.chi(alpha)
        recon = ramsey.chi_from_measurements(state, alpha)
        delta = abs(exact - recon)
        result["verify"] = {"chi_reconstruction_delta": delta}
        if delta > VERIFY_TOL:
            raise ConsistencyError(f"chi reconstruction delta {delta:g}")
    try:
        for outcome, key in ((+1, "conditional_plus"), (-1, "conditional_minus")):
            cond, prob = ramsey.conditional_state(state, setting, outcome)
            result[key] = {"state": states.state_to_json(cond),
                           "probability": prob}
    except TypeError:
        pass  # family not closed under displacement; probabilities suffice
    if args.shots:
        counts = ramsey.sample_outcomes(state, setting, args.shots, args.seed)
        result["shots"] = {"n": args.shots, "seed": args.seed, **counts}
    _write(args, json.dumps(result, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_prepare(args) -> int:
    psi = parse_state(args.psi)
    if not isinstance(psi, states.CoherentSuperposition):
        raise UsageError("prepare needs a coherent-superposition --psi")
    alpha = complex(args.alpha_re, args.alpha_im)
    setting = ramsey.RamseySetting(args.phi, alpha)
    outcome = {"--": (-1, -1), "-+": (-1, +1), "+-": (+1, -1), "++": (+1, +1),
               "gg": (-1, -1), "ge": (-1, +1), "eg": (+1, -1),
               "ee": (+1, +1)}.get(args.outcome)
    if outcome is None:
        raise UsageError(f"bad outcome {args.outcome!r}, expected one of "
                         "--, -+, +-, ++ (or gg, ge, eg, ee)")
    state, prob = ramsey.prepare_conditional(psi, args.theta, args.phi0,
                                             setting, outcome, bell=args.bell)
    result = {"outcome": args.outcome, "probability": prob,
              "state": states.state_to_json(state)}
    _write(args, json.dumps(result, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catwitness",
        description="Non-classicality tests and entanglement witnesses for "
                    "bosonic superposition states")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state=True, grid=True):
        if state:
            p.add_argument("--state", required=True, help=_SCHEMA_HINT)
        if grid:
            p.add_argument("--grid", help='"min:max:step[,min:max:step]"')
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--verify", action="store_true",
                       help="cross-check against the Fock-space oracle")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--format", choices=["csv", "json"], default=None)

    p = sub.add_parser("chi", help="characteristic function on points or a grid")
    common(p)
    p.add_argument("--alpha", action="append",
                   help="displacement re[/im]; repeatable")
    p.set_defaults(fn=cmd_chi)

    p = sub.add_parser("ncregion", help="non-classicality region scan")
    common(p)
    p.add_argument("--certificate", choices=nonclassicality.CERTIFICATES,
                   default="nc2-det")
    p.add_argument("--threshold", type=float, default=None)
    p.set_defaults(fn=cmd_ncregion)

    p = sub.add_parser("decay", help="|chi_N| of the decohered state vs time")
    common(p)
    p.add_argument("--alpha", action="append", help="displacement re[/im]")
    p.add_argument("--nth", type=float, default=0.0)
    p.set_defaults(fn=cmd_decay)

    p = sub.add_parser("ptmin", help="min eigenvalue of the partially "
                                     "transposed 9x9 moment matrix")
    common(p, state=False)
    p.add_argument("--product", action="store_true",
                   help="separable control instead of the entangled cat")
    p.set_defaults(fn=cmd_ptmin)

    p = sub.add_parser("witness", help="expectation of the explicit witness")
    common(p, state=False)
    p.add_argument("--eps", type=float, default=math.pi / 2)
    p.add_argument("--w", type=float, default=0.4247)
    p.add_argument("--product", action="store_true",
                   help="separable control instead of the entangled cat")
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("ramsey", help="outcome probabilities and conditional "
                                      "states of one Ramsey measurement")
    common(p, grid=False)
    p.add_argument("--alpha", action="append", help="displacement re[/im]")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--shots", type=int, default=0)
    p.set_defaults(fn=cmd_ramsey)

    p = sub.add_parser("prepare", help="two-mode conditional preparation")
    common(p, state=False, grid=False)
    p.add_argument("--psi", required=True, help="initial single-mode state")
    p.add_argument("--theta", type=float, default=0.0,
                   help="Bell-state phase Theta")
    p.add_argument("--phi0", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--alpha-re", type=float, required=True)
    p.add_argument("--alpha-im", type=float, default=0.0)
    p.add_argument("--outcome", required=True,
                   help="qubit outcomes: gg, ge, eg, ee (aliases --, -+, ...)")
    p.add_argument("--bell", choices=["phi_plus", "psi_minus"],
                   default="phi_plus")
    p.set_defaults(fn=cmd_prepare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConsistencyError, ArithmeticError) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
