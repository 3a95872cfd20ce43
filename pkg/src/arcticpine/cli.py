"""Command-line surface over the whole pipeline.

Every command writes a deterministic artifact (JSON, CSV, SVG, or
canonical polynomial text) to stdout or --out.  Parameters are exact
rationals (`p/q`); the only sanctioned numeric approximation is the
uniform alpha for r != s, which is flagged in output metadata.

Exit codes: 0 ok, 2 invalid configuration, 3 size cap exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arctic import (ArcticCurve, ViewDirection, arctic_curve, cone_surface,
                     holographic_curve, scaled_domain, theta_conjecture)
from .density import (density_recursion, limit_initial_data, profile,
                      profile_csv, source_profile)
from .lattice import (LatticePoint, SlantDirection, height, plane_index,
                      tessellate)
from .pinecone import (build_graph, edge_positions, enumerate_matchings,
                       gale_robinson, gale_robinson_number)
from .poly import SparsePoly
from .svg import render_curve_svg, render_profile_svg
from .tsystem import InitialData, evolve


def _triple(text: str):
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated integers")
    return tuple(parts)


def _pair(text: str):
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated integers")
    return tuple(parts)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _int_list(text: str):
    return [int(p) for p in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="arcticpine", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, rst=True):
        if rst:
            p.add_argument("--rst", type=_triple, required=True,
                           help="slant direction r,s,t")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv", "svg", "text"),
                       help="output format (each command has a default)")
        p.add_argument("--cap", type=int, default=60,
                       help="size cap for enumerative work")
        p.add_argument("--threads", type=int, default=1,
                       help="worker count hint (recorded in metadata)")

    def init_flags(p):
        p.add_argument("--sigma", type=_rational)
        p.add_argument("--tau", type=_rational)
        p.add_argument("--weights", type=_int_list,
                       help="2x2-periodic weights a,b,c,d")

    p = sub.add_parser("surface", help="stepped-surface heights / tessellation")
    common(p)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--apex", type=_triple,
                   help="tessellate the backward cone of this apex instead")

    p = sub.add_parser("graph", help="pinecone dimer graph as JSON")
    common(p)
    p.add_argument("--apex", type=_triple, required=True)

    p = sub.add_parser("pinecone", help="Gale-Robinson data of one pinecone")
    common(p)
    p.add_argument("--apex", type=_triple, required=True)

    p = sub.add_parser("solve", help="evolve the T-system to one point")
    common(p)
    p.add_argument("--point", type=_triple, required=True)
    init_flags(p)

    p = sub.add_parser("density", help="one density value (exact)")
    common(p)
    p.add_argument("--source", type=_pair, required=True)
    p.add_argument("--target", type=_triple, required=True)
    init_flags(p)

    p = sub.add_parser("profile", help="density profile grid")
    common(p)
    p.add_argument("--source", type=_pair, default=(0, 0))
    p.add_argument("--k", type=_int_list, required=True,
                   help="target levels, e.g. 88,90")
    p.add_argument("--scan", choices=("target", "source"), default="target",
                   help="vary targets of one source, or sources of one target")
    init_flags(p)

    p = sub.add_parser("arctic", help="arctic curve of a slant direction")
    common(p)
    init_flags(p)
    p.add_argument("--keep-spurious", action="store_true",
                   help="keep spurious low-degree factors in the report")
    p.add_argument("--resolution", type=int, default=800)

    p = sub.add_parser("holo", help="arctic curve under a view direction")
    common(p)
    p.add_argument("--view", type=_triple, required=True)
    p.add_argument("--resolution", type=int, default=800)

    p = sub.add_parser("cone", help="3D cone surface over the source curve")
    common(p)

    p = sub.add_parser("verify", help="golden suite against printed tables")
    common(p, rst=False)
    p.add_argument("--suite", default="paper-tables",
                   choices=("paper-tables",))
    return top


def _initial_data(d: SlantDirection, args) -> InitialData:
    if getattr(args, "weights", None):
        if len(args.weights) != 4:
            raise ValueError("--weights needs four integers a,b,c,d")
        return InitialData.periodic2x2(d, *args.weights)
    if getattr(args, "sigma", None) is not None:
        if args.tau is None:
            raise ValueError("--sigma requires --tau")
        return limit_initial_data(d, args.sigma, args.tau)
    return InitialData.uniform(d)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _curve_payload(curve: ArcticCurve, args, d=None) -> str:
    fmt = args.format or ("svg" if args.out and str(args.out).endswith(".svg")
                          else "json")
    segments = list(curve.domain_segments)
    meta = {
        "theta": curve.parameters.get("theta"),
        "view": list(curve.view) if curve.view else None,
        "params": {k: str(v) for k, v in curve.parameters.items()
                   if k not in ("H",)},
        "segments": [[str(s.slope), str(s.intercept), str(s.u_min), str(s.u_max)]
                     for s in segments],
        "spurious": [f.to_text() for f in curve.known_linear_factors],
        "threads": args.threads,
    }
    if fmt == "text":
        return curve.eliminant.to_text() + "\n"
    if fmt == "svg":
        subs = None
        if "A" in curve.eliminant.vars and "A_numeric" in curve.parameters:
            subs = {"A": curve.parameters["A_numeric"]}
        return render_curve_svg(curve.eliminant, segments=segments, subs=subs,
                                resolution=getattr(args, "resolution", 800),
                                meta=meta)
    meta["eliminant"] = curve.eliminant.to_text()
    return json.dumps(meta, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# command bodies


def cmd_surface(args):
    d = SlantDirection(*args.rst)
    if args.apex:
        return tessellate(d, args.apex).to_json() + "\n"
    w = args.window
    rows = [{"i": i, "j": j, "k": height(d, i, j)}
            for i in range(-w, w + 1) for j in range(-w, w + 1)]
    return json.dumps({"direction": list(d), "heights": rows},
                      sort_keys=True) + "\n"


def cmd_graph(args):
    d = SlantDirection(*args.rst)
    return build_graph(d, args.apex).to_json() + "\n"


def cmd_pinecone(args):
    d = SlantDirection(*args.rst)
    g = build_graph(d, args.apex)
    params = gale_robinson(d, args.apex)
    xs = sorted({f.x for f in g.faces}) or [0]
    table = {str(x): edge_positions(d, args.apex, x)
             for x in range(min(xs) - 1, max(xs) + 2)}
    count = len(enumerate_matchings(g, cap=args.cap))
    payload = {
        "direction": list(d),
        "apex": list(args.apex),
        "gale_robinson": params.as_tuple(),
        "matching_count": count,
        "recurrence_value": gale_robinson_number(params,
                                                 params.n - params.m),
        "edge_positions": table,
    }
    return json.dumps(payload, sort_keys=True) + "\n"


def cmd_solve(args):
    d = SlantDirection(*args.rst)
    init = _initial_data(d, args)
    if init.kind == "sigmatau":
        raise ValueError("solve needs weights, not sigma/tau limits")
    val = evolve(init, args.point)
    if isinstance(val, SparsePoly):
        return val.to_text() + "\n"
    return f"{val}\n"


def cmd_density(args):
    d = SlantDirection(*args.rst)
    init = _initial_data(d, args)
    horizon = plane_index(d, LatticePoint.of(*args.target))
    field = density_recursion(d, init, args.source, horizon)
    val = Fraction(field.value(args.target))
    i, j, k = args.target
    return ("i,j,k,rho_num,rho_den\n"
            f"{i},{j},{k},{val.numerator},{val.denominator}\n")


def cmd_profile(args):
    d = SlantDirection(*args.rst)
    init = _initial_data(d, args)
    if args.scan == "source":
        rows = []
        for k in sorted(args.k):
            tgt = (args.source[0], args.source[1], k)
            rows.extend(source_profile(d, init, tgt))
    else:
        rows = profile(d, init, args.source, sorted(args.k))
    if (args.format or "csv") == "svg":
        return render_profile_svg(rows, meta={"direction": list(d),
                                              "k": sorted(args.k)})
    return profile_csv(rows)


def cmd_arctic(args):
    d = SlantDirection(*args.rst)
    if args.sigma is not None and args.tau is None:
        raise ValueError("--sigma requires --tau")
    curve = arctic_curve(d, sigma=args.sigma, tau=args.tau,
                         keep_spurious=args.keep_spurious)
    return _curve_payload(curve, args, d)


def cmd_holo(args):
    d = SlantDirection(*args.rst)
    curve = holographic_curve(d, ViewDirection(*args.view))
    if not curve.domain_segments:
        curve.domain_segments = tuple(scaled_domain(ViewDirection(*args.view)))
    return _curve_payload(curve, args, d)


def cmd_cone(args):
    d = SlantDirection(*args.rst)
    curve = arctic_curve(d)
    surf = cone_surface(curve, d)
    return surf.to_text() + "\n"


def cmd_verify(args):
    from .verify import paper_table_suite
    results = paper_table_suite()
    width = max(len(name) for name, _ in results)
    lines = [f"{name.ljust(width)}  {'pass' if ok else 'FAIL'}"
             for name, ok in results]
    ok_all = all(ok for _, ok in results)
    lines.append(f"{'total'.ljust(width)}  "
                 f"{sum(ok for _, ok in results)}/{len(results)}")
    return "\n".join(lines) + "\n", ok_all


_COMMANDS = {
    "surface": cmd_surface,
    "graph": cmd_graph,
    "pinecone": cmd_pinecone,
    "solve": cmd_solve,
    "density": cmd_density,
    "profile": cmd_profile,
    "arctic": cmd_arctic,
    "holo": cmd_holo,
    "cone": cmd_cone,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3 if "cap" in str(exc) else 2
    except (AssertionError, ArithmeticError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 4
    status = 0
    if isinstance(out, tuple):
        out, ok = out
        status = 0 if ok else 1
    _emit(args, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
