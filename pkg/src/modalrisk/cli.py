"""Command-line interface: ``modalrisk {eval,example,check,govern,frame-validate}``.

Exit codes: 0 success, 1 domain error (bad frame, failed check, I/O),
2 usage error (bad flags or an unparsable formula).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path


from . import applications as apps
from . import formula, governance, modal, properties
from .algebra import get_package
from .frame import FrameError, build_finite_frame, classify_frame

SHIPPED = ("liquidity", "contagion", "two_world")


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{float(x):.6f}"


def resolve_frame(arg: str):
    """Load a frame from a path, or a shipped frame by name (``liquidity``, ``contagion``, ``two_world``)."""
    p = Path(arg)
    if p.exists():
        return build_finite_frame(p.read_text())
    name = p.name.removesuffix(".json").replace("-", "_")
    if name in SHIPPED:
        text = resources.files("modalrisk").joinpath("data", f"{name}.json").read_text()
        return build_finite_frame(text)
    raise FrameError(f"no such frame file or shipped frame: {arg!r}")


def _world_index(f, w: str) -> int:
    return f.index(w)


# -- eval -------------------------------------------------------------------


def cmd_eval(args) -> int:
    pkg = get_package(args.package)
    try:
        phi = formula.parse(args.formula)
    except formula.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    f = resolve_frame(args.frame)
    formula.check_resolves(phi, f)
    reg = governance.AuditRegister.load(args.register) if args.register else None
    vals = formula.evaluate(phi, f, pkg, reg)
    if args.world is not None:
        print(_fmt(vals[_world_index(f, args.world)]))
    else:
        for w, v in zip(f.worlds, vals):
            print(f"{w} {_fmt(v)}")
    return 0


# -- example ----------------------------------------------------------------


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _print_counts(counts: dict[str, int]) -> None:
    for k, v in counts.items():
        print(f"{k}={v}")


def _example_two_world(args) -> int:
    pkg = get_package(args.package)
    fuzzy = tuple(args.fuzzy) if args.fuzzy else (1.0, 0.6, 0.0, 1.0, 0.0, 0.9)
    tables = apps.two_world_catalog(pkg, fuzzy)
    tables.append(apps.fuzzy_surface(pkg, args.steps))
    out = _out_dir(args)
    for t in tables:
        (out / f"two_world_{t.name}.csv").write_text(t.to_csv())
        if t.name != "fuzzy_surface":
            print(f"# {t.name}")
            sys.stdout.write(t.to_csv())
    return 0


def _example_model_risk(args) -> int:
    if args.steps < 2:
        raise ValueError("--steps must be at least 2")
    g = apps.model_risk_grid(args.alpha, args.c, args.beta_mu, args.beta_sigma,
                             (args.mu_range[0], args.mu_range[1], args.steps),
                             (args.sigma_range[0], args.sigma_range[1], args.steps))
    out = _out_dir(args)
    g.to_csv(out / "model_risk.csv")
    g.to_pgm(out / "model_risk.pgm")
    _print_counts(g.counts())
    print(f"hesitation={g.hesitation_count()}")
    print(f"nested={'true' if g.nested() else 'false'}")
    return 0


def _example_flood(args) -> int:
    g = apps.flood_grid(args.c, args.a_x, args.a_y, args.beta, args.steps)
    q = apps.flood_quadrants(g, rho_high=args.rho_high, rho_low=args.rho_low)
    out = _out_dir(args)
    g.to_csv(out / "flood.csv")
    g.to_pgm(out / "flood.pgm")
    _write_quadrants(q, g, out / "flood_quadrants.csv")
    _print_counts(g.counts())
    print(f"hesitation={g.hesitation_count()}")
    print(f"nested={'true' if g.nested() else 'false'}")
    _print_counts(q.counts())
    return 0


def _write_quadrants(q: apps.QuadrantMap, g: apps.RegionGrid, path: Path) -> None:
    xs, ys = g.coordinates()
    lines = ["x,y,Kp,DiaKp,rho,quadrant,action"]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            lines.append(f"{x:.6f},{y:.6f},{int(q.box[i, j])},{int(q.diamond[i, j])},{q.rho[i, j]:.6f},"
                         f"{apps.QUADRANTS[q.quadrant[i, j]]},{apps.FLOOD_ACTIONS[q.action[i, j]]}")
    path.write_text("\n".join(lines) + "\n")


def _example_contagion(args) -> int:
    rep = apps.contagion_scenario(get_package(args.package), args.include_actual)
    print(rep.line())
    if rep.witness:
        prop, w, gap = rep.witness
        print(f"witness: {prop} at {w}, gap {_fmt(gap)}")
    return 0


EXAMPLES = {
    "two-world": _example_two_world,
    "model-risk": _example_model_risk,
    "flood": _example_flood,
    "contagion": _example_contagion,
}


def cmd_example(args) -> int:
    return EXAMPLES[args.name](args)


# -- check ------------------------------------------------------------------


def _laws_on_frame(args) -> int:
    f = resolve_frame(args.frame)
    pkg = get_package((args.package_list or ["godel_min"])[0])
    stds = args.std or sorted(f.relations)
    entries = []
    for std in stds:
        for r in properties.check_package_laws(f, std, pkg, seed=args.seed):
            e = {"standard": std, "principle": r.principle, "holds": r.holds, "seed": args.seed}
            if r.witness:
                e["witness"] = {"proposition": r.witness[0], "world": r.witness[1], "gap": r.witness[2]}
            entries.append(e)
    text = json.dumps(entries, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    return 0


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def cmd_check(args) -> int:
    if args.frame:
        if args.suite != "laws":
            raise UsageError("--frame is only supported with the laws suite")
        return _laws_on_frame(args)
    pkgs = [get_package(p).tnorm_id for p in args.package_list] if args.package_list else None
    entries = properties.run_suite(args.suite, args.seed, args.frames, pkgs)
    _emit(properties.report_json(entries), args.out)
    return 0 if properties.all_satisfied(entries) else 1


# -- govern -----------------------------------------------------------------


def cmd_govern(args) -> int:
    f = resolve_frame(args.frame)
    pkg = get_package(args.package)
    th = governance.GovernanceThresholds(args.alpha, args.beta, args.eta, args.delta, args.iota)
    stds = args.std or ["K"]
    f.prop(args.prop)
    for s in stds:
        f.relation(s)
    if args.register:
        try:
            open(args.register, "a", encoding="utf-8").close()
        except OSError as exc:
            raise FrameError(f"cannot write register {args.register!r}: {exc}") from exc
    reg = governance.AuditRegister.load(args.register) if args.register else governance.AuditRegister()
    start = len(reg.events)
    for std in stds:
        b = modal.statuses(f, std, args.prop, pkg)
        moore = modal.refine(f, std, args.prop, "moore", pkg)
        for i, w in enumerate(f.worlds):
            acts = governance.apply_rule(b, float(moore[i]), th, i)
            prefix = f"[{std}] " if len(stds) > 1 else ""
            print(f"{prefix}{w}: {governance.format_actions(acts)}")
            if moore[i] > 0 and moore[i] >= th.delta:
                reg.record(governance.DiagnosticRecord("moore", args.prop, std, w, float(moore[i])))
    if args.register:
        try:
            n = reg.append_to(args.register, start)
        except OSError as exc:
            raise FrameError(f"cannot write register {args.register!r}: {exc}") from exc
        print(f"audit events appended: {n}")
    return 0


# -- frame-validate ---------------------------------------------------------


def cmd_validate(args) -> int:
    f = resolve_frame(args.frame)
    pkg = get_package(args.package)
    print(f"ok: {f.size} worlds; standards {', '.join(f.relations)}; "
          f"propositions {', '.join(f.propositions) or '-'}")
    for std in f.relations:
        prof = classify_frame(f, std, pkg)
        flags = [k for k, v in vars(prof).items() if v]
        print(f"{std}: {', '.join(flags) or '-'}")
    return 0


# -- parser -----------------------------------------------------------------


def _unit(s: str) -> float:
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{s} is not in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modalrisk", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def pkg_flag(p):
        p.add_argument("--package", default="godel_min",
                       help="t-norm package: godel_min, product, lukasiewicz (default godel_min)")

    p = sub.add_parser("eval", help="evaluate a formula on a frame")
    p.add_argument("frame")
    p.add_argument("formula")
    p.add_argument("--world")
    p.add_argument("--register", help="audit event log consulted by A(...)")
    pkg_flag(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("example", help="reproduce a worked example")
    p.add_argument("name", choices=sorted(EXAMPLES))
    p.add_argument("--out", default="modalrisk_out", help="output directory for CSV/PGM files")
    pkg_flag(p)
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--c", type=float, default=None, help="threshold (model-risk default 100, flood default 0.8)")
    p.add_argument("--beta-mu", type=float, default=0.10)
    p.add_argument("--beta-sigma", type=float, default=0.045)
    p.add_argument("--mu-range", type=float, nargs=2, default=apps.MODEL_RISK_WINDOW[0][:2])
    p.add_argument("--sigma-range", type=float, nargs=2, default=apps.MODEL_RISK_WINDOW[1][:2])
    p.add_argument("--steps", type=int, default=None, help="grid nodes per axis (default 201; two-world surface 11)")
    p.add_argument("--a-x", type=float, default=1.0)
    p.add_argument("--a-y", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.08)
    p.add_argument("--rho-high", type=float, default=0.9)
    p.add_argument("--rho-low", type=float, default=0.1)
    p.add_argument("--fuzzy", type=_unit, nargs=6, metavar=("A", "B", "C", "D", "X", "Y"))
    p.add_argument("--include-actual", action="store_true", help="contagion: add w0 to its own belief set")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("check", help="run the law and bound suites")
    p.add_argument("suite", choices=properties.SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames", type=int, default=1000, help="hypothesis-satisfying frames per bound")
    p.add_argument("--package", dest="package_list", action="append",
                   help="restrict to a package (repeatable; default all)")
    p.add_argument("--frame", help="laws suite only: check a single frame instead of random ones")
    p.add_argument("--std", action="append", help="standards to check with --frame (repeatable)")
    p.add_argument("--out", help="also write the JSON report here")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("govern", help="apply the governance rule and record diagnostics")
    p.add_argument("frame")
    p.add_argument("--prop", default=None, help="proposition (default: the frame's first)")
    p.add_argument("--std", action="append", help="standard (repeatable; default K)")
    th = governance.GovernanceThresholds()
    for name in ("alpha", "beta", "eta", "delta", "iota"):
        p.add_argument(f"--{name}", type=_unit, default=getattr(th, name))
    p.add_argument("--register", help="NDJSON audit event log to append to")
    pkg_flag(p)
    p.set_defaults(func=cmd_govern)

    p = sub.add_parser("frame-validate", help="validate a frame document and print its profile")
    p.add_argument("frame")
    pkg_flag(p)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "example":
        if args.c is None:
            args.c = 0.8 if args.name == "flood" else 100.0
        if args.steps is None:
            args.steps = 11 if args.name == "two-world" else 201
    try:
        if args.command == "govern" and args.prop is None:
            f = resolve_frame(args.frame)
            if not f.propositions:
                raise FrameError("frame has no propositions; pass --prop")
            args.prop = next(iter(f.propositions))
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"modalrisk: error: {exc}", file=sys.stderr)
        return 2
    except (FrameError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
