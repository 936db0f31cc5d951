"""Command-line entry point: ``anyonflux <link|expect|algebra|rep|braid|chern> ...``.

Exit codes: 0 success, 2 parse or validation error, 3 numerical precondition
failure (gap closing, degree residual over tolerance).
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from importlib import resources
from pathlib import Path

from . import algebra as alg
from . import bands, braid, links, modular, report

log = logging.getLogger("anyonflux")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
DEFAULT_N = 64


def shipped_examples() -> list[str]:
    return sorted(p.name for p in resources.files("anyonflux").joinpath("data").iterdir())


def example_path(name: str) -> Path:
    return Path(str(resources.files("anyonflux").joinpath("data", name)))


def _looks_inline(arg: str) -> bool:
    return "\n" in arg or "\\n" in arg or bool(
        re.match(r"\s*(components\b|[OU]\d|\d+\s*:)", arg)
    )


def read_input(arg: str) -> tuple[str, str]:
    """Return ``(label, text)`` for a file path, a shipped example name or inline text."""
    if arg == "-":
        return "<stdin>", sys.stdin.read()
    path = Path(arg)
    if path.is_file():
        return str(path), path.read_text(encoding="utf-8")
    if arg in shipped_examples():
        return arg, example_path(arg).read_text(encoding="utf-8")
    if _looks_inline(arg):
        return "<inline>", arg.replace("\\n", "\n")
    raise FileNotFoundError(f"no such file or shipped example: {arg}")


def _emit(payload: dict, fmt: str) -> None:
    sys.stdout.write(report.dumps(payload) if fmt == "json" else report.table(payload))


def _parse_sector(text: str) -> modular.Sector:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"--sector expects 'alpha,beta', got {text!r}") from None
    return modular.Sector(a, b)


# -- subcommands -------------------------------------------------------------

def cmd_link(args) -> dict:
    label, text = read_input(args.input)
    d = links.parse_link(text)
    inv = links.invariants(d)
    out = inv.to_dict()
    if args.K is not None:
        out["K"] = args.K
        out["expectation"] = links.expectation(inv, args.K)
    if args.plot:
        from .plotting import plot_phase_wheel

        plot_phase_wheel(inv.total_crossing_number, args.plot, K=args.K, title=label)
    return out


def cmd_expect(args) -> dict:
    _, text = read_input(args.input)
    inv = links.invariants(links.parse_link(text))
    return {
        "total_crossing_number": inv.total_crossing_number,
        "K": args.K,
        "expectation": links.expectation(inv, args.K),
    }


def _element_report(op: str, x: alg.AlgebraElement) -> dict:
    return {
        "operation": op,
        "result": alg.format_element(x),
        "w_basis": alg.format_element(x, basis="W"),
        "terms": [[w.c, w.a, w.b, coef] for w, coef in x],
    }


def cmd_algebra(args) -> dict:
    if args.op == "mul":
        elems = [alg.parse_element(e) for e in args.exprs]
        if len(elems) < 2:
            raise ValueError("mul needs at least two elements")
        x = elems[0]
        for y in elems[1:]:
            x = alg.mul(x, y)
        return _element_report("mul", x)
    if args.op == "stabilize":
        if len(args.exprs) != 1:
            raise ValueError("stabilize takes exactly one element")
        return _element_report("stabilize", alg.stabilize(alg.parse_element(args.exprs[0])))
    if args.op == "act":
        if len(args.exprs) != 2:
            raise ValueError("act takes a modular group element and one algebra element")
        g = alg.parse_sl2z(args.exprs[0])
        out = _element_report("act", alg.mcg_act(g, alg.parse_element(args.exprs[1])))
        out["matrix"] = g.as_list()
        return out
    raise ValueError(f"unknown algebra operation {args.op!r}")


def _intertwiner_report(rep, name, g, phases, tol) -> dict:
    it = modular.find_intertwiner(rep, g, phases=phases, tol=tol)
    strict = it if phases == "strict" else modular.find_intertwiner(rep, g, "strict", tol)
    image = modular.transformed_sector(rep, g, tol)
    out = {
        "generator": name,
        "matrix": g.as_list(),
        "found": it is not None,
        "sector_fixed": strict is not None,
        "image_sector": image.as_tuple(),
    }
    if it is not None:
        out.update(
            residual=it.residual,
            unitarity=it.unitarity,
            mu=list(it.mu),
            smallest_singular_value=it.singular_values[0],
            P=it.P,
        )
    return out, it


def cmd_rep(args) -> dict:
    level = modular.Level(args.K, args.zeta_branch)
    sector = _parse_sector(args.sector)
    rep = modular.build_rep(level, sector)
    tol = args.tol_svd
    chars = modular.central_characters(rep, tol)
    out = {
        "K": args.K,
        "sector": sector.as_tuple(),
        "zeta": level.zeta,
        "q": level.q,
        "generators": {"U": rep.U, "V": rep.V},
        "residuals": modular.rep_residuals(rep),
        "characters": list(chars),
        "intertwiners": {},
    }
    found = {}
    for name, g in (("S", alg.S), ("T", alg.T)):
        out["intertwiners"][name], found[name] = _intertwiner_report(
            rep, name, g, args.phases, tol
        )
    try:
        rel = modular.modular_relations(level, sector, phases=args.phases, tol=tol)
        out["modular_relation_report"] = {
            "S4_phase": rel.s_phase,
            "S4_residual": rel.s_residual,
            "ST3_over_S2_phase": rel.st_phase,
            "ST3_residual": rel.st_residual,
        }
    except modular.MissingIntertwinerError as exc:
        out["modular_relation_report"] = {"error": str(exc)}
    if args.plot:
        from .plotting import plot_matrices

        mats = {"U": rep.U, "V": rep.V}
        mats.update({f"P_{k}": v.P for k, v in found.items() if v is not None})
        plot_matrices(mats, args.plot, title=f"K={args.K}, sector {sector.as_tuple()}")
    return out


def cmd_braid(args) -> dict:
    _, text = read_input(args.word)
    w = braid.parse_braid(text)
    out = {
        "strands": w.strands,
        "letters": list(w.letters),
        "exponent_sum": braid.exponent_sum(w),
        "permutation": list(braid.permutation(w)),
    }
    if args.K is not None:
        out["phase"] = braid.abelian_phase(w, args.K)
    inv = links.invariants(braid.closure(w))
    out["closure"] = inv.to_dict()
    if args.K is not None:
        out["closure"]["expectation"] = links.expectation(inv, args.K)
    if args.plot:
        from .plotting import plot_phase_wheel

        plot_phase_wheel(braid.exponent_sum(w), args.plot, K=args.K, title=str(w))
    return out


def cmd_chern(args) -> dict:
    spec = args.model
    if not spec.startswith(("qwz:", "constant:")) and not Path(spec).is_file():
        if spec in shipped_examples():
            spec = str(example_path(spec))
    model = bands.parse_model(spec)
    if model.kind == "table":
        N = model.params[0]
        if args.N not in (None, N):
            raise ValueError(f"tabulated model has N={N}; drop --N or pass --N {N}")
    else:
        N = args.N or DEFAULT_N
    m = bands.sample_model(model, N, gap_tol=args.tol_gap)
    res = bands.hopf_degree(m, residual_tol=args.tol_residual, antipodal_tol=args.tol_antipodal)
    out = {
        "N": N,
        "degree": res.degree,
        "raw": res.raw,
        "residual": res.residual,
        "min_gap": m.min_gap,
    }
    if args.plot:
        from .plotting import plot_bloch_map

        plot_bloch_map(m, args.plot, title=f"{model.label()}, degree {res.degree}")
    return out


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    plot = argparse.ArgumentParser(add_help=False)
    plot.add_argument("--plot", metavar="PATH", help="also write a figure to PATH")

    parser = argparse.ArgumentParser(
        prog="anyonflux",
        description="Framed-link, quantum-torus, braid and band-degree computations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", parents=[common, plot], help="link invariants")
    p.add_argument("input", help="file, shipped example name, or inline text")
    p.add_argument("--K", type=float, help="level for the expectation value")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("expect", parents=[common], help="Wilson-loop expectation value")
    p.add_argument("input")
    p.add_argument("--K", type=float, required=True)
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("algebra", parents=[common], help="quantum torus arithmetic")
    p.add_argument("op", choices=("mul", "stabilize", "act"))
    p.add_argument("exprs", nargs="+")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("rep", parents=[common, plot], help="level-K representation")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--sector", default="0,0", help="alpha,beta in [0,1)")
    p.add_argument("--zeta-branch", type=int, choices=(0, 1), default=0,
                   help="1 selects zeta = -exp(i pi/K)")
    p.add_argument("--phases", choices=("free", "strict"), default="free")
    p.add_argument("--tol-svd", type=float, default=modular.SVD_TOL)
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("braid", parents=[common, plot], help="braid phase and closure")
    p.add_argument("word", help="'n: k1 k2 ...', a file, or a shipped example")
    p.add_argument("--K", type=float)
    p.set_defaults(func=cmd_braid)

    p = sub.add_parser("chern", parents=[common, plot], help="Hopf degree of a 2-band model")
    p.add_argument("model", help="qwz:m=<float>, constant:x,y,z, or a jx,jy,dx,dy,dz CSV")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--tol-gap", type=float, default=bands.GAP_TOL)
    p.add_argument("--tol-residual", type=float, default=bands.RESIDUAL_TOL)
    p.add_argument("--tol-antipodal", type=float, default=bands.ANTIPODAL_TOL)
    p.set_defaults(func=cmd_chern)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
    )
    if getattr(args, "K", None) is not None and args.command in ("link", "expect", "braid") \
            and args.K == 0:
        print("anyonflux: error: level K must be nonzero", file=sys.stderr)
        return EXIT_INPUT
    log.debug("running %s", args.command)
    try:
        payload = args.func(args)
    except bands.NumericalPreconditionError as exc:
        print(f"anyonflux: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, FileNotFoundError) as exc:
        print(f"anyonflux: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
