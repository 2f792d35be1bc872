"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (error JSON on stderr),
2 on a usage error.
"""

import argparse
import json
import logging
import math
import sys

from .catalog import Catalog, certify_simple, enumerate_curves
from .config import load_config
from .errors import CurveGraphError, PreconditionError
from .experiments import (catalog_lengths, proportionality_check, qh_convergence,
                          rigidity_witness, thurston_csv, thurston_lower)
from .graph import (build_graph, extend_to_pants, graph_distance, induced_map, is_automorphism,
                    nonseparating_probe, orientation_differences)
from .hyperbolic import FNCoordinates, holonomy_from_fn, hyperbolic_length
from .intersection import self_intersection
from .mapping_class import MappingClassWord, humphries_curve
from .words import canonical_class, curve_from_json

log = logging.getLogger("curvegraph")


class UsageError(Exception):
    pass


def _clean(x):
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _format(x, pad=""):
    """JSON with objects indented and lists of scalars kept on one line."""
    inner = pad + "  "
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_format(v, inner)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        if all(isinstance(v, list) and not any(isinstance(u, (dict, list)) for u in v) for v in x):
            return "[\n" + ",\n".join(inner + json.dumps(v) for v in x) + "\n" + pad + "]"
        return "[\n" + ",\n".join(inner + _format(v, inner) for v in x) + "\n" + pad + "]"
    return json.dumps(x)


def dumps(obj):
    return _format(_clean(obj)) + "\n"


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _read_json(path, flag):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"{flag}: no such file {path!r}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: not valid JSON ({exc})")


def _floats(text, flag):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated numbers, got {text!r}")


def _ints(text, flag):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated integers, got {text!r}")


def surface_json(fn):
    return {"genus": fn.genus, "fn": fn.to_json()}


def load_surface(path, flag="--surface"):
    data = _read_json(path, flag)
    try:
        return FNCoordinates.from_json(int(data["genus"]), data["fn"])
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{flag}: malformed surface file ({exc})")


def load_catalog(path, flag="--catalog"):
    return Catalog.from_json(_read_json(path, flag))


def _curve_arg(text, g, flag):
    """A chain index ``c3`` or a comma-separated word."""
    if text.startswith("c"):
        try:
            return humphries_curve(g, int(text[1:]))
        except ValueError:
            raise UsageError(f"{flag}: bad chain index {text!r}")
    return canonical_class(_ints(text, flag), g)


# -- commands ---------------------------------------------------------------

def cmd_surface_new(args, cfg):
    fn = FNCoordinates(args.genus, _floats(args.lengths, "--lengths"), _floats(args.twists, "--twists"))
    h = holonomy_from_fn(fn, cfg.bits)
    log.info("relator residual %.3g", h.relator_residual)
    _write(args.out, dumps(surface_json(fn)))


def cmd_curves_enumerate(args, cfg):
    fn = load_surface(args.surface)
    h = holonomy_from_fn(fn)
    depth = cfg.depth if args.depth is None else args.depth
    seeds = None
    if args.seeds:
        seeds = [curve_from_json(w, fn.genus) for w in _read_json(args.seeds, "--seeds")]
    elif cfg.seeds != "default":
        seeds = [curve_from_json(w, fn.genus) for w in cfg.seeds]
    cat = enumerate_curves(h, depth, seeds, cap=cfg.entry_cap)
    bad = certify_simple(cat)
    if bad:
        raise PreconditionError(f"entries not certified simple: {bad}")
    if args.eager:
        cat.fill()
    log.info("%d entries, stability horizon %s", len(cat), cat.stability_horizon)
    _write(args.out, dumps(cat.to_json()))


def cmd_curves_classify(args, cfg):
    fn = load_surface(args.surface)
    h = holonomy_from_fn(fn)
    c = _curve_arg(args.word, fn.genus, "--word")
    si = self_intersection(h, c)
    out = {"word": list(c.word), "homology": list(c.homology), "length": hyperbolic_length(h, c),
           "self_intersection": si.count, "certified": si.certified, "simple": si.count == 0}
    # null-homologous <=> separating only makes sense for simple classes
    out["separating"] = (not any(c.homology)) if si.count == 0 else None
    _write(args.out, dumps(out))


def _graph(args):
    fn = load_surface(args.surface)
    cat = load_catalog(args.catalog)
    L = catalog_lengths(holonomy_from_fn(fn), cat)
    return cat, build_graph(cat, L)


def cmd_graph_build(args, cfg):
    cat, G = _graph(args)
    log.info("%d edges, %d ties, %d uncertified", len(G.edges), len(G.ties), len(G.uncertified))
    _write(args.out, dumps(G.to_json()))
    if args.dot:
        _write(args.dot, G.to_dot())


def cmd_graph_distance(args, cfg):
    cat, G = _graph(args)
    d = graph_distance(G, args.source, args.target)
    _write(args.out, dumps({"from": args.source, "to": args.target, "distance": float(d) if d == math.inf else d}))


def cmd_graph_check_auto(args, cfg):
    cat, G = _graph(args)
    if args.map:
        phi = {int(k): int(v) for k, v in _read_json(args.map, "--map").items()}
    elif args.mc is not None:
        phi = induced_map(cat, MappingClassWord(cat.genus, tuple(_ints(args.mc, "--mc"))))
    else:
        raise UsageError("graph check-auto: give --map or --mc")
    ok, violation = is_automorphism(G, phi)
    _write(args.out, dumps({"automorphism": ok, "checked": len(phi), "violation": violation}))


def cmd_pants_extend(args, cfg):
    cat, G = _graph(args)
    start = _ints(args.start, "--start") if args.start else []
    found = extend_to_pants(cat, G, start)
    _write(args.out, dumps({"start": start, "pants": found, "lengths": [G.lengths[i] for i in found]}))


def cmd_probe_nonsep(args, cfg):
    cat, G = _graph(args)
    rep = nonseparating_probe(cat, G, args.alpha, args.K)
    _write(args.out, dumps(rep.to_json()))


def cmd_exp_converge(args, cfg):
    fn = load_surface(args.surface)
    h = holonomy_from_fn(fn)
    beta = _curve_arg(args.beta, fn.genus, "--beta")
    tab = qh_convergence(h, args.twist, beta, args.n_max, bits=cfg.bits)
    log.info("limit %.12g, relative error %.3g, sup residual %.6g", tab.limit, tab.relative_error,
             tab.sup_residual)
    _write(args.out, tab.to_csv())


def cmd_exp_witness(args, cfg):
    hX = holonomy_from_fn(load_surface(args.x, "--x"))
    hY = holonomy_from_fn(load_surface(args.y, "--y"))
    cat = load_catalog(args.catalog)
    rep = rigidity_witness(hX, hY, cat, args.budget, cfg.cross_ratio)
    _write(args.out, dumps(rep.to_json()))


def cmd_exp_thurston(args, cfg):
    hX = holonomy_from_fn(load_surface(args.x, "--x"))
    hY = holonomy_from_fn(load_surface(args.y, "--y"))
    cat = load_catalog(args.catalog)
    _write(args.out, thurston_csv(thurston_lower(hX, hY, cat)))


def cmd_exp_proportional(args, cfg):
    hX = holonomy_from_fn(load_surface(args.x, "--x"))
    hY = holonomy_from_fn(load_surface(args.y, "--y"))
    cat = load_catalog(args.catalog)
    LX, LY = catalog_lengths(hX, cat), catalog_lengths(hY, cat)
    rep = proportionality_check(LX, LY, build_graph(cat, LX), args.tol or cfg.cross_ratio)
    rep["graph_orientation_differences"] = len(orientation_differences(build_graph(cat, LX),
                                                                       build_graph(cat, LY)))
    _write(args.out, dumps(rep))


# -- parser -----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="curvegraph", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="RunConfig JSON file")
    p.add_argument("--precision", help="binary64 or a mantissa bit count")
    p.add_argument("-v", "--verbose", action="store_true")
    top = p.add_subparsers(dest="group", required=True)

    def group(name):
        g = top.add_parser(name).add_subparsers(dest="cmd", required=True)
        return g

    def out(sp):
        sp.add_argument("--out", default="-", help="output file (default stdout)")

    def surf_cat(sp):
        sp.add_argument("--surface", required=True)
        sp.add_argument("--catalog", required=True)
        out(sp)

    surface = group("surface")
    sp = surface.add_parser("new")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--lengths", required=True)
    sp.add_argument("--twists", required=True)
    out(sp)
    sp.set_defaults(func=cmd_surface_new)

    curves = group("curves")
    sp = curves.add_parser("enumerate")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--seeds", help="JSON list of words")
    sp.add_argument("--eager", action="store_true", help="fill the whole intersection matrix")
    out(sp)
    sp.set_defaults(func=cmd_curves_enumerate)
    sp = curves.add_parser("classify")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--word", required=True, help="comma-separated letters or cN for a chain curve")
    out(sp)
    sp.set_defaults(func=cmd_curves_classify)

    graph = group("graph")
    sp = graph.add_parser("build")
    surf_cat(sp)
    sp.add_argument("--dot")
    sp.set_defaults(func=cmd_graph_build)
    sp = graph.add_parser("distance")
    surf_cat(sp)
    sp.add_argument("--from", dest="source", type=int, required=True)
    sp.add_argument("--to", dest="target", type=int, required=True)
    sp.set_defaults(func=cmd_graph_distance)
    sp = graph.add_parser("check-auto")
    surf_cat(sp)
    sp.add_argument("--map", help="JSON object id -> id")
    sp.add_argument("--mc", help="mapping class as comma-separated signed twist indices")
    sp.set_defaults(func=cmd_graph_check_auto)

    pants = group("pants")
    sp = pants.add_parser("extend")
    surf_cat(sp)
    sp.add_argument("--start", default="")
    sp.set_defaults(func=cmd_pants_extend)

    probe = group("probe")
    sp = probe.add_parser("nonsep")
    surf_cat(sp)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--K", type=int, default=5)
    sp.set_defaults(func=cmd_probe_nonsep)

    exp = group("exp")
    sp = exp.add_parser("converge")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--twist", type=int, default=1, help="chain index of the twist curve")
    sp.add_argument("--beta", default="c2")
    sp.add_argument("--n-max", type=int, default=30)
    out(sp)
    sp.set_defaults(func=cmd_exp_converge)
    for name, func in (("witness", cmd_exp_witness), ("thurston", cmd_exp_thurston),
                       ("proportional", cmd_exp_proportional)):
        sp = exp.add_parser(name)
        sp.add_argument("--x", required=True)
        sp.add_argument("--y", required=True)
        sp.add_argument("--catalog", required=True)
        out(sp)
        if name == "witness":
            sp.add_argument("--budget", type=int, default=40)
        if name == "proportional":
            sp.add_argument("--tol", type=float)
        sp.set_defaults(func=func)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        prec = args.precision
        if prec is not None and prec != "binary64":
            try:
                prec = int(prec)
            except ValueError:
                raise UsageError(f"--precision: expected binary64 or an integer, got {prec!r}")
        cfg = load_config(args.config, {"precision": prec})
        cfg.apply()
        args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"curvegraph: error: {exc}", file=sys.stderr)
        return 2
    except CurveGraphError as exc:
        print(json.dumps(_clean(exc.to_dict())), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
