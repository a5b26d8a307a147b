"""Batch command line: posteriors, risk curves, tree diagnostics, heatmaps.

Every number is printed with 7 significant digits so runs are reproducible
and the two engines can be compared byte for byte.  Exit codes: 0 success,
2 validation problem (bad file, unknown id, diagnosed individual), 3 family
history with probability zero.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

from .inference import InfeasibleEvidenceError
from .jtree import junction_tree_for
from .pedigree import load_pedigree
from .risk import risk_difference_at_tmax
from .service import analysis_response, resolve_model
from .tables import GENOTYPES

__all__ = ["main"]

HEATMAP_PI_STEP = 0.05
HEATMAP_TAU_RANGE = (20, 80, 5)


def _sig7(x: float) -> float:
    return float(f"{x:.7g}")


def _round7(doc):
    if isinstance(doc, float):
        return _sig7(doc)
    if isinstance(doc, dict):
        return {k: _round7(v) for k, v in doc.items()}
    if isinstance(doc, list):
        return [_round7(v) for v in doc]
    return doc


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_text(doc) -> str:
    return json.dumps(_round7(doc), indent=2) + "\n"


def _load_inputs(args):
    pedigree = load_pedigree(Path(args.pedigree))
    bundle = resolve_model(Path(args.model)) if args.model else resolve_model()
    return pedigree, bundle


def cmd_posterior(args) -> int:
    pedigree, bundle = _load_inputs(args)
    targets = args.individual or [ind.id for ind in pedigree.individuals]
    for ind_id in targets:
        if ind_id not in pedigree:
            raise KeyError(f"unknown individual {ind_id!r}")

    response = analysis_response(pedigree, bundle, [{"type": "posterior"}], engine=args.engine)
    marginals = {i: response["marginals"][i] for i in targets}
    carrier = {i: response["carrier_probability"][i] for i in targets}

    if args.format == "json":
        text = _json_text(
            {
                "log_evidence": response["log_evidence"],
                "marginals": marginals,
                "carrier_probability": carrier,
            }
        )
    else:
        out = io.StringIO()
        out.write("id," + ",".join(f"p{g}" for g in GENOTYPES) + ",carrier\n")
        for ind_id in targets:
            probs = ",".join(f"{marginals[ind_id][g]:.7g}" for g in GENOTYPES)
            out.write(f"{ind_id},{probs},{carrier[ind_id]:.7g}\n")
        text = out.getvalue()
    _emit(text, args.out)
    return 0


def _curve_csv(curves: list[dict]) -> str:
    columns = ["age", "risk_no_competing", "risk_competing", "posterior_carrier", "posterior_hazard"]
    out = io.StringIO()
    prefix = "individual," if len(curves) > 1 else ""
    out.write(prefix + ",".join(columns) + "\n")
    for curve in curves:
        lead = f"{curve['individual']}," if len(curves) > 1 else ""
        competing = curve["risk_competing"]
        for k, age in enumerate(curve["ages"]):
            mid = "" if competing is None else f"{competing[k]:.7g}"
            out.write(
                f"{lead}{age:.7g},{curve['risk_no_competing'][k]:.7g},{mid},"
                f"{curve['posterior_carrier'][k]:.7g},{curve['posterior_hazard'][k]:.7g}\n"
            )
    return out.getvalue()


def cmd_risk(args) -> int:
    pedigree, bundle = _load_inputs(args)
    queries = []
    for ind_id in args.individual:
        query = {"type": "risk", "individual": ind_id, "tmax": args.tmax, "dt": args.dt}
        if args.tau is not None:
            query["tau"] = args.tau
        queries.append(query)

    response = analysis_response(pedigree, bundle, queries, engine=args.engine)
    if args.format == "json":
        text = _json_text(
            {"log_evidence": response["log_evidence"], "curves": response["curves"]}
        )
    else:
        text = _curve_csv(response["curves"])
    _emit(text, args.out)
    return 0


def cmd_tree(args) -> int:
    pedigree, _ = _load_inputs(args)
    _, tree = junction_tree_for(pedigree)
    cliques = [
        {"members": list(tree.cliques[k]), "separator": list(tree.separators[k])}
        for k in range(len(tree.cliques))
    ]
    if args.format == "json":
        text = _json_text(
            {
                "variables": len(tree.variables),
                "cliques": cliques,
                "treewidth": tree.treewidth,
                "table_cost": tree.table_cost,
            }
        )
    else:
        out = io.StringIO()
        out.write("clique,members,separator,treewidth,table_cost\n")
        for k, entry in enumerate(cliques):
            members = ";".join(entry["members"])
            separator = ";".join(entry["separator"])
            out.write(f"{k},{members},{separator},{tree.treewidth},{tree.table_cost}\n")
        text = out.getvalue()
    _emit(text, args.out)
    return 0


def cmd_heatmap(args) -> int:
    bundle = resolve_model(Path(args.model)) if args.model else resolve_model()
    pi_values = [round(i * HEATMAP_PI_STEP, 2) for i in range(int(1 / HEATMAP_PI_STEP) + 1)]
    lo, hi, step = HEATMAP_TAU_RANGE
    tau_values = list(range(lo, hi + 1, step))

    cells = []
    for pi in pi_values:
        for tau in tau_values:
            difference = risk_difference_at_tmax(
                pi, tau, bundle.disease, bundle.death, t_max=args.tmax, delta_t=args.dt
            )
            cells.append({"pi": pi, "tau": tau, "difference": difference})

    if args.format == "json":
        text = _json_text({"cells": cells})
    else:
        out = io.StringIO()
        out.write("pi,tau,difference\n")
        for cell in cells:
            out.write(f"{cell['pi']:.7g},{cell['tau']:.7g},{cell['difference']:.7g}\n")
        text = out.getvalue()
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pedrisk",
        description="Genotype posteriors and disease-risk curves from family history.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, pedigree_required=True):
        if pedigree_required:
            p.add_argument("--pedigree", required=True, help="pedigree JSON file")
        p.add_argument("--model", help="model JSON file (default: built-in)")
        p.add_argument("--engine", choices=("bp", "brute"), default="bp")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("posterior", help="per-individual genotype posteriors")
    add_common(p)
    p.add_argument("--individual", action="append", help="restrict output to this id")
    p.set_defaults(run=cmd_posterior)

    p = sub.add_parser("risk", help="risk curves with and without competing mortality")
    add_common(p)
    p.add_argument("--individual", action="append", required=True)
    p.add_argument("--tau", type=float, help="censoring age (default: recorded)")
    p.add_argument("--tmax", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.set_defaults(run=cmd_risk)

    p = sub.add_parser("tree", help="junction-tree diagnostics")
    add_common(p)
    p.set_defaults(run=cmd_tree)

    p = sub.add_parser("heatmap", help="risk overstatement when mortality is ignored")
    add_common(p, pedigree_required=False)
    p.add_argument("--tmax", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.set_defaults(run=cmd_heatmap)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except InfeasibleEvidenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
