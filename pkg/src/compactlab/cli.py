"""Batch command line: every capability as a subcommand writing files plus a manifest.

Exit codes::

    0  success
    1  usage error (bad flags or missing family arguments)
    2  equation text that does not parse
    3  numeric failure (invalid request, no convergence, failed property check)
    4  simulation blow-up
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

import numpy as np

from compactlab.closed_forms import (
    FAMILY_FIELDS,
    FAMILY_NAMES,
    FamilyArgumentError,
    TravelingWave,
    build_wave,
    family_equation,
    observed_orders,
    profile_csv,
    residual_convergence,
    sample_grid,
)
from compactlab.config import get_settings
from compactlab.dsl import EquationParseError, resolve_equation, validate
from compactlab.frame import (
    FrameElement,
    FrameExpansion,
    MorletAtom,
    MorletParams,
    derivative_estimate,
    dominant_scale,
    elements_in_window,
    expand,
    frame_bounds,
    reconstruction_csv,
    square_expand,
    two_scale_check,
)
from compactlab.logging import configure_logging
from compactlab.manifest import RunManifest, dump_json
from compactlab.similarity import (
    build_relation,
    classify,
    format_branch,
    ledger_for,
    level_crossings,
    parse_branch,
    relation_text,
    sweep,
    sweep_law,
    width_text,
)
from compactlab.similarity.relation import check_branch
from compactlab.simulator import (
    BlowUpError,
    SimConfig,
    SimTrace,
    initial_profile,
    run,
    snapshots_csv,
    write_binary,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_BLOWUP = 4

SQUARE_TOLERANCE = 1e-10


class UsageError(Exception):
    """A flag combination the parser cannot express, found while running."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(value: float) -> str:
    return f"{value:.17g}"


# --- argument types ------------------------------------------------------------


def _binding(text: str) -> tuple[str, float]:
    name, sep, raw = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(raw)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"parameter {name!r} needs a number") from e


def _numbers(text: str, count: int) -> list[float]:
    pieces = text.split(":")
    if len(pieces) != count:
        raise argparse.ArgumentTypeError(f"expected {count} ':'-separated numbers, got {text!r}")
    try:
        return [float(piece) for piece in pieces]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"non-numeric value in {text!r}") from e


def _grid_range(text: str) -> tuple[float, float, int]:
    """``start:stop:count``."""
    start, stop, count = _numbers(text, 3)
    if count < 1 or count != int(count):
        raise argparse.ArgumentTypeError(f"sample count must be a positive integer in {text!r}")
    return start, stop, int(count)


def _interval(text: str) -> tuple[float, float]:
    start, stop = _numbers(text, 2)
    if stop <= start:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return start, stop


def _law(text: str) -> tuple[float, int]:
    """``alpha`` or ``alpha:power`` for ``V = alpha * A^power``."""
    alpha, _, power = text.partition(":")
    try:
        return float(alpha), int(power) if power else 1
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected alpha[:power], got {text!r}") from e


def _atom(text: str) -> MorletAtom:
    j, k, c = _numbers(text, 3)
    if j != int(j) or k != int(k):
        raise argparse.ArgumentTypeError(f"scale and translation must be integers in {text!r}")
    return MorletAtom(j=int(j), k=int(k), c=c)


def _dt(text: str) -> float | str:
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"dt must be a number or 'auto', got {text!r}") from e


# --- shared output helpers -----------------------------------------------------


def _output_name(args: argparse.Namespace, default: str) -> str:
    return str(args.emit) if args.emit is not None else default


def _points_csv(header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(value) for value in row])
    return buffer.getvalue()


# --- analyze -------------------------------------------------------------------


def _cmd_analyze(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    params = dict(args.param)
    manifest.hash_input("equation", args.equation)
    ast = resolve_equation(args.equation, parameters=params)
    rel = build_relation(ast)
    branch = parse_branch(args.branch) if args.branch else None
    if branch is not None:
        check_branch(rel, branch)
    report = classify(
        rel, branch, params=params, law_alpha=args.law[0], law_power=args.law[1]
    )

    payload = {
        "equation": ast.to_text(),
        "params": params,
        "relation": relation_text(rel),
        "width": width_text(rel),
        "validation": validate(ast).model_dump(mode="json"),
        "report": report.model_dump(mode="json"),
    }
    shown = rel.substitute(params)
    if params:
        payload["bound_relation"] = relation_text(shown)
        payload["bound_width"] = width_text(shown)
    lines = [f"equation: {ast.to_text()}", f"relation: {relation_text(shown)}"]
    lines.append(f"width:    {width_text(shown)}")
    if branch is not None:
        payload["branch"] = format_branch(branch)
        payload["branch_relation"] = relation_text(rel, branch)
        payload["branch_width"] = width_text(rel, branch)
        lines.append(f"branch {format_branch(branch)}: {width_text(rel, branch)}")
    if report.degenerate:
        lines.append("degenerate: every width is admissible")
    if report.rest_amplitude:
        lines.append("rest amplitude: " + ", ".join(str(a) for a in report.rest_amplitude))
    if args.paper_compat:
        entries = ledger_for(ast, params)
        payload["ledger"] = [entry.model_dump(mode="json") for entry in entries]
        for entry in entries:
            verdict = "agrees" if entry.agrees else "differs"
            lines.append(f"printed ({entry.family}): {entry.printed_width} [{verdict}]")

    manifest.write_output(out, _output_name(args, "analysis.json"), dump_json(payload))
    print("\n".join(lines))


# --- sweep ---------------------------------------------------------------------


def _cmd_sweep(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    params = dict(args.param)
    manifest.hash_input("equation", args.eq)
    rel = build_relation(resolve_equation(args.eq, parameters=params))
    a0, a1, count = args.A
    amplitudes = np.linspace(a0, a1, count).tolist()
    branch_list = [parse_branch(text) for text in args.branch] or None
    for branch in branch_list or []:
        check_branch(rel, branch)
    jobs = args.jobs or get_settings().jobs
    if args.law is not None:
        alpha, power = args.law
        table = sweep_law(
            rel, amplitudes, alpha, power, branch_list=branch_list, params=params, jobs=jobs
        )
    else:
        v0, v1, samples = args.V
        table = sweep(
            rel, amplitudes, (v0, v1), samples, branch_list=branch_list, params=params, jobs=jobs
        )

    if args.format == "json":
        rows = [
            {
                "A": point.amplitude,
                "V": point.velocity,
                "branch": format_branch(point.branch),
                "L": list(point.roots),
            }
            for point in table.points
        ]
        manifest.write_output(out, _output_name(args, "sweep.json"), dump_json(rows))
    else:
        manifest.write_output(out, _output_name(args, "sweep.csv"), table.to_csv())

    if args.L0 is not None:
        crossings = [
            {
                "A": crossing.amplitude,
                "branch": format_branch(crossing.branch),
                "root_index": crossing.root_index,
                "V": crossing.velocity,
            }
            for crossing in level_crossings(table, args.L0)
        ]
        manifest.write_output(out, "crossings.json", dump_json(crossings))
        print(f"{len(crossings)} crossing(s) of L0 = {_num(args.L0)}")
    print(f"{len(table)} point(s), at most {table.max_roots} root(s) per point")


# --- exact / residual ----------------------------------------------------------


_FLAG_NAMES = {"flat": "--lambda", "top_V": "--top-V"}


def _wave(args: argparse.Namespace) -> TravelingWave:
    values = {name: getattr(args, name) for name in FAMILY_FIELDS}
    try:
        wave = build_wave(args.family, **values)
    except FamilyArgumentError as e:
        flags = ", ".join(_FLAG_NAMES.get(name, "--" + name) for name in e.missing)
        raise UsageError(f"family {args.family} needs {flags}") from e
    logger.info("Built %s: %s", args.family, wave.model_dump(by_alias=True))
    return wave


def _cmd_exact(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    wave = _wave(args)
    if args.range is not None:
        x = np.linspace(args.range[0], args.range[1], args.points)
    else:
        x = sample_grid(wave, args.t, args.points)
    manifest.write_output(out, "wave.json", dump_json(wave.model_dump(by_alias=True)))
    if args.format == "json":
        payload = {"t": args.t, "x": x.tolist(), "u": wave.evaluate(x, args.t).tolist()}
        manifest.write_output(out, _output_name(args, "profile.json"), dump_json(payload))
    else:
        manifest.write_output(out, _output_name(args, "profile.csv"), profile_csv(wave, x, args.t))
    print(f"{wave.family}: A = {_num(wave.amplitude)}, V = {_num(wave.velocity)}")


def _cmd_residual(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    wave = _wave(args)
    params = dict(args.param)
    source = args.eq if args.eq is not None else family_equation(wave)
    manifest.hash_input("equation", source)
    ast = resolve_equation(source, parameters=params)
    dxs = [args.dx / 2**level for level in range(args.refine)]
    reports = residual_convergence(
        wave, ast, dxs, scheme_order=args.scheme_order, t=args.t, params=params
    )
    orders = observed_orders(reports) if len(reports) > 1 else []
    if args.format == "csv":
        rows = [(r.dx, r.max_abs, r.interior_max_abs, r.interior_points) for r in reports]
        text = _points_csv(["dx", "max_abs", "interior_max_abs", "interior_points"], rows)
        manifest.write_output(out, _output_name(args, "residual.csv"), text)
    else:
        payload = {
            "family": wave.family,
            "equation": ast.to_text(),
            "reports": [report.model_dump() for report in reports],
            "orders": orders,
        }
        manifest.write_output(out, _output_name(args, "residual.json"), dump_json(payload))
    for report in reports:
        print(f"dx = {_num(report.dx)}: interior residual {_num(report.interior_max_abs)}")
    if orders:
        print("observed orders: " + ", ".join(f"{order:.3f}" for order in orders))


# --- simulate ------------------------------------------------------------------


def _write_trace(
    args: argparse.Namespace, manifest: RunManifest, out: Path, trace: SimTrace
) -> None:
    manifest.write_output(
        out, "diagnostics.json", dump_json(trace.diagnostics().model_dump(mode="json"))
    )
    if trace.snapshots and trace.final.inventory is not None:
        inventory = trace.final.inventory.model_dump(mode="json")
        manifest.write_output(out, _output_name(args, "inventory.json"), dump_json(inventory))
    if args.snapshots == "csv":
        manifest.write_output(out, "snapshots.csv", snapshots_csv(trace.x, trace.snapshots))
    elif args.snapshots == "bin":
        path = write_binary(out / "snapshots.bin", trace.snapshots)
        manifest.record_output(out, path)


def _cmd_simulate(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    params = dict(args.param)
    manifest.hash_input("equation", args.eq)
    manifest.hash_input("initial", args.init)
    config = SimConfig(
        length=args.length,
        points=args.points,
        t_end=args.tend,
        dt=args.dt,
        hyperviscosity=args.hyperviscosity,
        output_stride=args.stride,
        equation=args.eq,
        params=params,
        scheme_order=args.scheme_order,
    )
    x = config.grid()
    u0 = initial_profile(args.init, x, center=args.center)
    try:
        trace = run(u0, config)
    except BlowUpError as e:
        _write_trace(args, manifest, out, e.trace)
        raise
    _write_trace(args, manifest, out, trace)
    final = trace.final.inventory
    count = len(final) if final is not None else 0
    print(
        f"t = {_num(trace.final.t)}: {count} compacton(s), "
        f"max mass drift {trace.max_mass_drift():.3e}"
    )


# --- frame ---------------------------------------------------------------------


def _frame_data(text: str) -> tuple[Callable[[np.ndarray], np.ndarray], tuple[float, float]]:
    """Named data for ``frame expand``: ``gaussian[:width[:center]]`` or ``element:k,j``."""

    name, _, raw = text.partition(":")
    pieces = [piece for piece in raw.replace(",", ":").split(":") if piece]
    if name == "gaussian" and len(pieces) <= 2:
        width = float(pieces[0]) if pieces else 1.0
        center = float(pieces[1]) if len(pieces) > 1 else 0.0
        reach = 6 * width
        return (
            lambda x: np.exp(-(((x - center) / width) ** 2)),
            (center - reach, center + reach),
        )
    if name == "element" and len(pieces) == 2:
        element = FrameElement(k=int(pieces[0]), j=int(pieces[1]))
        return element, element.support
    raise UsageError(f"unknown frame data {text!r}; expected gaussian[:w[:c]] or element:k,j")


def _read_xu(path: Path) -> tuple[np.ndarray, np.ndarray]:
    with path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    if not rows or not {"x", "u"} <= set(rows[0]):
        raise ValueError(f"{path} must be a CSV with x and u columns")
    return (
        np.array([float(row["x"]) for row in rows]),
        np.array([float(row["u"]) for row in rows]),
    )


def _frame_two_scale(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    defect = two_scale_check(args.j, args.k, shift=args.shift)
    payload = {"j": args.j, "k": args.k, "shift": args.shift, "defect": defect}
    manifest.write_output(out, _output_name(args, "two_scale.json"), dump_json(payload))
    print(f"two-scale defect at j={args.j}, k={args.k}: {defect:.3e}")


def _frame_expand(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    if args.input is not None:
        manifest.hash_input(str(args.input), args.input.read_bytes())
        data = _read_xu(args.input)
        window = args.window
        x_out = np.linspace(*(window or (data[0][0], data[0][-1])), args.samples)
    else:
        manifest.hash_input("data", args.data)
        data, default_window = _frame_data(args.data)
        window = args.window or default_window
        x_out = np.linspace(*window, args.samples)
    expansion = expand(data, args.jmin, args.jmax, window=window, method=args.method)
    manifest.write_output(
        out, _output_name(args, "expansion.json"), dump_json(expansion.coefficients_json())
    )
    manifest.write_output(out, "reconstruction.csv", reconstruction_csv(expansion, x_out))
    print(f"{len(expansion.terms)} coefficient(s), L2 error {expansion.l2_error:.3e}")


def _frame_square(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    rng = np.random.default_rng(args.seed)
    pool = [
        (e.k, e.j) for j in range(args.jmax + 1) for e in elements_in_window((0.0, 2.0), j)
    ]
    size = min(args.terms, len(pool))
    x = np.linspace(-0.5, 2.5, 10_000)
    worst = 0.0
    for _ in range(args.count):
        picks = rng.choice(len(pool), size=size, replace=False)
        expansion = FrameExpansion.from_coefficients({pool[i]: float(rng.normal()) for i in picks})
        deviation = np.max(np.abs(square_expand(expansion)(x) - expansion.reconstruct(x) ** 2))
        worst = max(worst, float(deviation))
    payload = {"seed": args.seed, "count": args.count, "max_deviation": worst}
    manifest.write_output(out, _output_name(args, "square.json"), dump_json(payload))
    print(f"square expansion over {args.count} random expansions: max deviation {worst:.3e}")
    if worst > SQUARE_TOLERANCE:
        raise ArithmeticError(f"square expansion deviates by {worst:.3e} from direct squaring")


def _frame_bounds(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    bounds = frame_bounds(args.jmin, args.jmax, args.window)
    manifest.write_output(out, _output_name(args, "bounds.json"), dump_json(bounds.model_dump()))
    print(f"{bounds.elements} element(s): bounds [{bounds.lower:.6g}, {bounds.upper:.6g}]")


def _frame_morlet(args: argparse.Namespace, manifest: RunManifest, out: Path) -> None:
    params = MorletParams(alpha=args.alpha, atoms=args.atom)
    multi, single = derivative_estimate(params, args.x0, args.n)
    payload = {
        "alpha": args.alpha,
        "x0": args.x0,
        "n": args.n,
        "multi_scale": [multi.real, multi.imag],
        "single_scale": [single.real, single.imag],
        "dominant_half_width": dominant_scale(params, args.x0),
    }
    manifest.write_output(out, _output_name(args, "morlet.json"), dump_json(payload))
    print(f"d^{args.n}u/dx^{args.n} at {_num(args.x0)} ~ {_num(abs(multi))} (modulus)")


# --- serve ---------------------------------------------------------------------


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    from compactlab.app import create_app

    settings = get_settings()
    host = args.host or settings.host
    port = args.port or settings.port
    logger.info("Starting compactlab service on %s:%s", host, port)
    uvicorn.run(create_app(), host=host, port=port)
    return EXIT_OK


# --- parser --------------------------------------------------------------------


def _family_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", required=True, choices=FAMILY_NAMES)
    parser.add_argument("--A", type=float, help="amplitude")
    parser.add_argument("--V", type=float, help="velocity")
    parser.add_argument("--lambda", dest="flat", type=float, help="KAK plateau length")
    parser.add_argument("--delta", type=float, help="offset level or top start on the plateau")
    parser.add_argument("--n", type=int, help="K(n,n) order")
    parser.add_argument("--k", type=float, help="wavenumber of the periodic MKdV wave")
    parser.add_argument("--top-V", dest="top_V", type=float, help="velocity of the top compacton")
    parser.add_argument("--t", type=float, default=0.0, help="evaluation time")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--emit", type=Path, help="file name of the primary output")
    common.add_argument("--param", type=_binding, action="append", default=[], metavar="K=V")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int)
    common.add_argument("--debug", action="store_true")

    parser = _Parser(prog="compactlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="similarity analysis")
    analyze.add_argument("equation", help="equation text or alias (KdV, K22, Knm:3,3, ...)")
    analyze.add_argument("--branch", help="sign branch such as +-+")
    analyze.add_argument("--paper-compat", action="store_true", help="add the ledger entries")
    analyze.add_argument(
        "--law", type=_law, default=(1.0, 1), help="V = alpha*A^p for bifurcations"
    )
    analyze.set_defaults(handler=_cmd_analyze)

    sweep_parser = sub.add_parser("sweep", parents=[common], help="width curves")
    sweep_parser.add_argument("--eq", required=True)
    sweep_parser.add_argument("--A", type=_grid_range, required=True, metavar="START:STOP:N")
    velocity = sweep_parser.add_mutually_exclusive_group(required=True)
    velocity.add_argument("--V", type=_grid_range, metavar="START:STOP:N")
    velocity.add_argument("--law", type=_law, metavar="ALPHA[:P]")
    sweep_parser.add_argument("--L0", type=float, help="reference width for crossings")
    sweep_parser.add_argument("--branch", action="append", default=[])
    sweep_parser.set_defaults(handler=_cmd_sweep)

    exact = sub.add_parser("exact", parents=[common], help="sampled closed-form profile")
    _family_flags(exact)
    exact.add_argument("--points", type=int, default=1001)
    exact.add_argument("--range", type=_interval, metavar="START:STOP")
    exact.set_defaults(handler=_cmd_exact)

    residual_parser = sub.add_parser("residual", parents=[common], help="PDE residual")
    _family_flags(residual_parser)
    residual_parser.add_argument("--eq", help="equation (defaults to the family's equation)")
    residual_parser.add_argument("--dx", type=float, default=1e-3)
    residual_parser.add_argument("--scheme-order", type=int, choices=(2, 4), default=4)
    residual_parser.add_argument("--refine", type=int, default=1, help="number of halvings + 1")
    residual_parser.set_defaults(handler=_cmd_residual)

    simulate = sub.add_parser("simulate", parents=[common], help="periodic simulation")
    simulate.add_argument("--eq", default="K22")
    simulate.add_argument("--init", required=True, help="compacton[:A], stretched:s[:A], ...")
    simulate.add_argument("--tend", type=float, required=True)
    simulate.add_argument("--length", type=float, default=80.0)
    simulate.add_argument("--points", type=int, default=1024)
    simulate.add_argument("--dt", type=_dt, default="auto")
    simulate.add_argument("--stride", type=int, default=100)
    simulate.add_argument("--hyperviscosity", type=float)
    simulate.add_argument("--scheme-order", type=int, choices=(2, 4), default=4)
    simulate.add_argument("--center", type=float, default=0.0)
    simulate.add_argument("--snapshots", choices=("csv", "bin", "none"), default="csv")
    simulate.set_defaults(handler=_cmd_simulate)

    frame = sub.add_parser("frame", help="compacton frame and Morlet atoms")
    actions = frame.add_subparsers(dest="action", required=True)

    two_scale = actions.add_parser("two-scale", parents=[common])
    two_scale.add_argument("--j", type=int, default=0)
    two_scale.add_argument("--k", type=int, default=0)
    two_scale.add_argument("--shift", type=int, default=1)
    two_scale.set_defaults(handler=_frame_two_scale)

    expand_parser = actions.add_parser("expand", parents=[common])
    source = expand_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--data", help="gaussian[:width[:center]] or element:k,j")
    source.add_argument("--input", type=Path, help="CSV file with x,u columns")
    expand_parser.add_argument("--jmin", type=int, default=0)
    expand_parser.add_argument("--jmax", type=int, default=2)
    expand_parser.add_argument("--window", type=_interval, metavar="START:STOP")
    expand_parser.add_argument("--method", choices=("greedy", "projection"), default="projection")
    expand_parser.add_argument("--samples", type=int, default=1001)
    expand_parser.set_defaults(handler=_frame_expand)

    square = actions.add_parser("square", parents=[common])
    square.add_argument("--count", type=int, default=50)
    square.add_argument("--terms", type=int, default=5)
    square.add_argument("--jmax", type=int, default=2)
    square.set_defaults(handler=_frame_square)

    bounds = actions.add_parser("bounds", parents=[common])
    bounds.add_argument("--jmin", type=int, default=-1)
    bounds.add_argument("--jmax", type=int, default=2)
    bounds.add_argument("--window", type=_interval, default=(0.0, 4.0), metavar="START:STOP")
    bounds.set_defaults(handler=_frame_bounds)

    morlet = actions.add_parser("morlet", parents=[common])
    morlet.add_argument("--alpha", type=float, default=8.0)
    morlet.add_argument("--atom", type=_atom, action="append", required=True, metavar="J:K:C")
    morlet.add_argument("--x0", type=float, default=0.0)
    morlet.add_argument("--n", type=int, default=1)
    morlet.set_defaults(handler=_frame_morlet)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.add_argument("--debug", action="store_true")

    return parser


def _exit_code(error: BaseException) -> int:
    if isinstance(error, UsageError):
        return EXIT_USAGE
    if isinstance(error, EquationParseError):
        return EXIT_PARSE
    if isinstance(error, BlowUpError):
        return EXIT_BLOWUP
    return EXIT_NUMERIC


def main(argv: Sequence[str] | None = None) -> int:
    arguments = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(arguments)
    configure_logging(logging.DEBUG if args.debug else None)
    if args.command == "serve":
        return _serve(args)

    command = args.command if args.command != "frame" else f"frame {args.action}"
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(subcommand=command, argv=arguments)
    logger.info("Running %s into %s", command, out)
    try:
        args.handler(args, manifest, out)
    except (UsageError, ValueError, TypeError, ArithmeticError, RuntimeError, OSError) as e:
        code = _exit_code(e)
        logger.error("%s failed (exit %s): %s", command, code, e)
        print(f"error: {e}", file=sys.stderr)
        manifest.finish(code, e)
    else:
        code = EXIT_OK
        manifest.finish(code)
    manifest.write(out)
    if code == EXIT_OK:
        logger.info("%s finished with %s output(s)", command, len(manifest.outputs))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
