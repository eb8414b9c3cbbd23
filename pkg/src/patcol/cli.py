"""Command-line interface: construct, colour, analyse, catalogue.

All results are JSON on standard output, rendered canonically (sorted keys)
so identical inputs give byte-identical output.  Exit codes: 0 when the
computation completed, 2 on invalid input, 3 when some verdict stayed
"unknown" because a time budget ran out.

Pattern-set flags accept inline JSON (e.g. ``--Q "[[3,1]]"``) or ``@file``
references; class-structured hypergraphs are given by parameters
(``--sigma "n=3,r=4,q=3"``) and are only materialised under ``--explicit``.
Configuration precedence: flags override environment variables (PATCOL_*),
which override the optional JSON config file, which overrides defaults.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from . import __version__
from .analysis import check_tight, gap_witness_search, ramsey_check, verify_lemma_constructions
from .budget import BudgetExceeded
from .catalog import CatalogEntry, catalog_append, digest_inputs
from .clique import VertexCapExceeded, brute_force_clique, omega_sigma
from .colouring import spectrum
from .hypergraph import (
    EdgeCapExceeded,
    Hypergraph,
    SigmaHypergraph,
    build_complete,
    build_grid,
    build_ramsey,
    build_sigma_explicit,
    read_hypergraph,
    write_hypergraph,
)
from .partitions import (
    FAMILY_KINDS,
    PatternSet,
    build_family,
    classify_robust,
    enumerate_partitions,
    ex_closure,
    rd_closure,
)
from .sigma_engine import sigma_spectrum

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNKNOWN = 3

ENV_PREFIX = "PATCOL_"


@dataclass
class Config:
    budget_s: float | None = None
    edge_cap: int = 10**7
    threads: int = 1
    catalog_path: str | None = None


def _load_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    path = args.config or os.environ.get(ENV_PREFIX + "CONFIG")
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        cfg.budget_s = data.get("budget_s", cfg.budget_s)
        cfg.edge_cap = data.get("edge_cap", cfg.edge_cap)
        cfg.threads = data.get("threads", cfg.threads)
        cfg.catalog_path = data.get("catalog_path", cfg.catalog_path)
    if ENV_PREFIX + "BUDGET" in os.environ:
        cfg.budget_s = float(os.environ[ENV_PREFIX + "BUDGET"])
    if ENV_PREFIX + "EDGE_CAP" in os.environ:
        cfg.edge_cap = int(os.environ[ENV_PREFIX + "EDGE_CAP"])
    if ENV_PREFIX + "THREADS" in os.environ:
        cfg.threads = int(os.environ[ENV_PREFIX + "THREADS"])
    if ENV_PREFIX + "CATALOG" in os.environ:
        cfg.catalog_path = os.environ[ENV_PREFIX + "CATALOG"]
    if args.budget is not None:
        cfg.budget_s = args.budget
    if args.edge_cap is not None:
        cfg.edge_cap = args.edge_cap
    if args.threads is not None:
        cfg.threads = args.threads
    if args.catalog is not None:
        cfg.catalog_path = args.catalog
    if cfg.threads < 1:
        raise ValueError("threads must be at least 1")
    return cfg


def _json_or_file(text: str):
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"cannot parse JSON argument {text!r}: {exc}") from exc


def _pattern_set(text: str, r: int) -> PatternSet:
    data = _json_or_file(text)
    if not isinstance(data, list):
        raise ValueError(f"expected a JSON array of partitions, got {text!r}")
    return PatternSet.from_json(r, data)


def _sigma_params(text: str) -> tuple[int, int, int]:
    vals = {}
    for item in text.split(","):
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in ("n", "r", "q") or not raw.strip().isdigit():
            raise ValueError(f"bad structure parameters {text!r}; expected n=..,r=..,q=..")
        vals[key] = int(raw)
    missing = {"n", "r", "q"} - vals.keys()
    if missing:
        raise ValueError(f"structure parameters {text!r} missing {sorted(missing)}")
    return vals["n"], vals["r"], vals["q"]


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _load_hypergraph_arg(args, cfg: Config) -> Hypergraph:
    if args.file:
        return read_hypergraph(args.file)
    n, r, q = _sigma_params(args.sigma)
    s = SigmaHypergraph(n, r, q, _pattern_set(args.Sigma, r))
    return build_sigma_explicit(s, edge_cap=cfg.edge_cap)


def _cmd_partitions(args, cfg) -> tuple[dict, bool]:
    ps = enumerate_partitions(args.r)
    return {"r": args.r, "count": len(ps), "partitions": ps.to_json()}, False


def _cmd_closure(args, cfg) -> tuple[dict, bool]:
    if (args.rd is None) == (args.ex is None):
        raise ValueError("give exactly one of --rd or --ex")
    which = "rd" if args.rd is not None else "ex"
    seed = _pattern_set(args.rd if which == "rd" else args.ex, args.r)
    closed = rd_closure(seed) if which == "rd" else ex_closure(seed)
    return {"r": args.r, "closure": which, "input": seed.to_json(), "result": closed.to_json()}, False


def _cmd_classify(args, cfg) -> tuple[dict, bool]:
    q = _pattern_set(args.Q, args.r)
    report = classify_robust(q)
    return {"r": args.r, "Q": q.to_json(), **report.to_json()}, False


def _cmd_build(args, cfg) -> tuple[dict, bool]:
    if args.kind == "complete":
        h = build_complete(args.n, args.r)
    elif args.kind == "ramsey":
        h = build_ramsey(args.n, args.r, args.p)
    elif args.kind == "grid":
        rp = _pattern_set(args.row_patterns, args.r)
        cp = _pattern_set(args.col_patterns, args.r)
        h = build_grid(args.rows, args.cols, args.cell_size, rp, cp, args.r, edge_cap=cfg.edge_cap)
    elif args.kind == "family":
        params = {
            name: getattr(args, name)
            for name in ("alpha", "beta", "s", "t", "a", "b")
            if getattr(args, name) is not None
        }
        fam = build_family(args.family, args.r, **params)
        return {"r": args.r, "family": args.family, "patterns": fam.to_json()}, False
    elif args.kind == "sigma":
        n, r, q = _sigma_params(args.sigma)
        s = SigmaHypergraph(n, r, q, _pattern_set(args.Sigma, r))
        if not args.explicit:
            return {
                "kind": "sigma",
                **s.key(),
                "vertices": s.vertex_count,
                "unrealizable_types": s.unrealizable_types().to_json(),
            }, False
        h = build_sigma_explicit(s, edge_cap=cfg.edge_cap)
    else:
        raise ValueError(f"unknown build kind {args.kind!r}")
    if args.out:
        write_hypergraph(h, args.out)
        return {"written": args.out, "r": h.r, "vertices": h.vertex_count, "edges": len(h.edges)}, False
    return h.to_json_dict(), False


def _cmd_spectrum(args, cfg) -> tuple[dict, bool]:
    if args.file or args.explicit:
        h = _load_hypergraph_arg(args, cfg)
        q = _pattern_set(args.Q, h.r)
        k_max = args.k_max if args.k_max is not None else h.vertex_count
        spec = spectrum(h, q, k_max=k_max, budget_s=cfg.budget_s)
    else:
        if not args.sigma:
            raise ValueError("give --file, or --sigma with --Sigma")
        n, r, qsize = _sigma_params(args.sigma)
        s = SigmaHypergraph(n, r, qsize, _pattern_set(args.Sigma, r))
        q = _pattern_set(args.Q, r)
        k_max = args.k_max if args.k_max is not None else s.vertex_count
        spec = sigma_spectrum(s, q, k_max=k_max, budget_s=cfg.budget_s)
    return spec.to_json_dict(), bool(spec.unknown)


def _cmd_clique(args, cfg) -> tuple[dict, bool]:
    if args.file:
        h = read_hypergraph(args.file)
        omega = brute_force_clique(h, vertex_cap=args.vertex_cap)
        return {"method": "brute-force", "omega": omega}, False
    n, r, q = _sigma_params(args.sigma)
    s = SigmaHypergraph(n, r, q, _pattern_set(args.Sigma, r))
    result = omega_sigma(s, structure_caps=not args.uncapped)
    return {"method": "k-full", **result.to_json_dict()}, False


def _cmd_tight(args, cfg) -> tuple[dict, bool]:
    n, r, qsize = _sigma_params(args.sigma)
    s = SigmaHypergraph(n, r, qsize, _pattern_set(args.Sigma, r))
    q = _pattern_set(args.Q, r) if args.Q else s.edge_types
    report = check_tight(s, q, budget_s=cfg.budget_s)
    return report.to_json_dict(), report.inconclusive


def _cmd_gaps(args, cfg) -> tuple[dict, bool]:
    q = _pattern_set(args.Q, args.r)
    sigma_sets = None
    if args.Sigma:
        sigma_sets = [PatternSet.from_json(args.r, [p]) for p in _json_or_file(args.Sigma)]
    report = gap_witness_search(
        args.r,
        q,
        range(args.n_min, args.n_max + 1),
        range(args.q_min, args.q_max + 1),
        sigma_sets=sigma_sets,
        k_max=args.k_max,
        budget_s=cfg.budget_s,
    )
    return report.to_json_dict(), bool(report.unresolved)


def _cmd_ramsey(args, cfg) -> tuple[dict, bool]:
    from math import comb

    q = _pattern_set(args.Q, comb(args.p, args.r))
    report = ramsey_check(args.n, args.r, args.p, args.k, q, budget_s=cfg.budget_s)
    return report.to_json_dict(), report.colourable is None


def _cmd_verify(args, cfg) -> tuple[dict, bool]:
    if args.suite != "lemmas":
        raise ValueError(f"unknown suite {args.suite!r}; available: lemmas")
    budget = cfg.budget_s if cfg.budget_s is not None else 600.0
    payload = verify_lemma_constructions(args.r, budget_s=budget)
    has_unknown = any(rep["verdict"] == "unknown" for rep in payload["reports"])
    return payload, has_unknown


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--budget", type=float, help="time budget per decision, seconds")
    common.add_argument("--edge-cap", type=int, dest="edge_cap", help="explicit edge cap")
    common.add_argument("--threads", type=int, help="reserved; engines are sequential")
    common.add_argument("--catalog", help="append results to this catalogue file")

    parser = argparse.ArgumentParser(prog="patcol", description=__doc__)
    parser.add_argument("--version", action="version", version=f"patcol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partitions", parents=[common], help="enumerate partitions of r")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(handler=_cmd_partitions)

    p = sub.add_parser("closure", parents=[common], help="reduction or expansion closure")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--rd", help="pattern set to close under part merging")
    p.add_argument("--ex", help="pattern set to close under part splitting")
    p.set_defaults(handler=_cmd_closure)

    p = sub.add_parser("classify", parents=[common], help="robustness flags of a pattern set")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--Q", required=True)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("build", parents=[common], help="construct hypergraphs and pattern families")
    p.add_argument("--kind", required=True, choices=["complete", "sigma", "grid", "ramsey", "family"])
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--cell-size", type=int, dest="cell_size")
    p.add_argument("--row-patterns", dest="row_patterns")
    p.add_argument("--col-patterns", dest="col_patterns")
    p.add_argument("--sigma", help="structure parameters n=..,r=..,q=..")
    p.add_argument("--Sigma", help="allowed edge types")
    p.add_argument("--explicit", action="store_true", help="materialise the edge set")
    p.add_argument("--family", choices=list(FAMILY_KINDS))
    for name in ("alpha", "beta", "s", "t", "a", "b"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--out", help="write hypergraph JSON here instead of stdout")
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("spectrum", parents=[common], help="feasible colour counts and gaps")
    p.add_argument("--file", help="explicit hypergraph JSON file")
    p.add_argument("--sigma", help="structure parameters n=..,r=..,q=..")
    p.add_argument("--Sigma", help="allowed edge types")
    p.add_argument("--Q", required=True, help="allowed colour patterns")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--explicit", action="store_true", help="run the explicit engine on the materialised edges")
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("clique", parents=[common], help="clique number")
    p.add_argument("--file", help="explicit hypergraph JSON file (brute force)")
    p.add_argument("--sigma", help="structure parameters n=..,r=..,q=..")
    p.add_argument("--Sigma", help="allowed edge types")
    p.add_argument("--uncapped", action="store_true", help="drop the capacity caps (experimental)")
    p.add_argument("--vertex-cap", type=int, dest="vertex_cap", default=40)
    p.set_defaults(handler=_cmd_clique)

    p = sub.add_parser("tight", parents=[common], help="tight colourability report")
    p.add_argument("--sigma", required=True, help="structure parameters n=..,r=..,q=..")
    p.add_argument("--Sigma", required=True, help="allowed edge types")
    p.add_argument("--Q", help="allowed colour patterns (defaults to the edge types)")
    p.set_defaults(handler=_cmd_tight)

    p = sub.add_parser("gaps", parents=[common], help="search a parameter grid for spectrum gaps")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--n-min", type=int, dest="n_min", default=1)
    p.add_argument("--n-max", type=int, dest="n_max", required=True)
    p.add_argument("--q-min", type=int, dest="q_min", default=1)
    p.add_argument("--q-max", type=int, dest="q_max", required=True)
    p.add_argument("--Sigma", help="restrict to these single-type edge sets (array of partitions)")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.set_defaults(handler=_cmd_gaps)

    p = sub.add_parser("ramsey", parents=[common], help="bundle-hypergraph colourability check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--Q", required=True)
    p.set_defaults(handler=_cmd_ramsey)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(handler=_cmd_verify)

    return parser


def _catalogue(args, cfg: Config, payload: dict, wall_time_s: float) -> None:
    if not cfg.catalog_path:
        return
    inputs = {k: v for k, v in vars(args).items() if k not in ("handler",) and v is not None}
    entry = CatalogEntry(
        input_digest=digest_inputs(inputs),
        result=payload,
        engine_version=__version__,
        wall_time_s=round(wall_time_s, 6),
        command=args.command,
    )
    catalog_append(entry, cfg.catalog_path)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        start = time.perf_counter()
        payload, has_unknown = args.handler(args, cfg)
    except (ValueError, OSError, EdgeCapExceeded, VertexCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded:
        _emit({"verdict": "unknown", "reason": "time budget exhausted"})
        return EXIT_UNKNOWN
    _emit(payload)
    _catalogue(args, cfg, payload, time.perf_counter() - start)
    return EXIT_UNKNOWN if has_unknown else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
