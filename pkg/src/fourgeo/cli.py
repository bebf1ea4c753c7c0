"""Command line front end.

Every subcommand writes one JSON report (``map`` writes CSV plus a JSON
sidecar) containing the schema version, the full configuration and the seed,
so ``fourgeo replay REPORT`` can re-run it and compare byte for byte.

Exit codes: 0 success, 1 failed regression or replay mismatch,
2 infeasible/unreachable, 3 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from .covers import CoverTower, chern, einstein_flag
from .dissolution import dissolve
from .einstein import SearchBounds, assemble_main_theorem, pq_structures
from .errors import GeographyError, InputError, Unreachable
from .invariants import from_chi_c1sq, hitchin_thorpe, homeo_type
from .projective import MultidegreeCI, canonical_vector, ci_invariants
from .regression import run_checks
from .salvetti import KTupleSpec, slope_report, synthesize
from .symplectic import DEFAULT_Y_INDICES, RegionConfig, plan_point, region_membership, sum_invariants

SCHEMA = "fourgeo-report/1"
SEED_ENV = "FOURGEO_SEED"
CSV_COLUMNS = ("chi", "c1sq", "e", "sigma", "tags", "recipe")


def jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    return value


def _fractions(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse rational list {text!r}: {exc}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise InputError(f"cannot parse integer list {text!r}: {exc}") from None


def _spec(config: dict) -> KTupleSpec:
    m0 = config.get("m0", "auto")
    return KTupleSpec(
        k=config["k"],
        mu=_fractions(config["mu"]),
        delta=Fraction(config.get("delta", "1/32")),
        alpha=None if config.get("alpha") in (None, "auto") else Fraction(config["alpha"]),
        m0=None if m0 in (None, "auto") else int(m0),
        parity=config.get("parity", "odd"),
        seed=config["seed"],
    )


# ---------------------------------------------------------------- commands


def cmd_tower(config: dict) -> dict:
    tower = CoverTower.parse(config["stages"])
    cn = chern(tower)
    K = tower.canonical_multiple
    return {
        "tower": tower.to_json(),
        "invariants": cn.to_json(),
        "canonical_multiple": K,
        "general_type": K >= 1,
        "spin": K % 2 == 0,
        "hitchin_thorpe": hitchin_thorpe(cn),
        "verdict": einstein_flag(tower).to_json(),
    }


def cmd_synth(config: dict) -> dict:
    result = synthesize(_spec(config))
    return {"result": result.to_json(), "slope_report": jsonable(slope_report(result))}


def cmd_plan(config: dict) -> dict:
    indices = tuple(range(1, config.get("y_max_index", DEFAULT_Y_INDICES[-1]) + 1))
    recipe = plan_point(config["chi"], config["c1sq"], indices)
    out = {
        "recipe": recipe.to_json(),
        "description": recipe.describe(),
        "invariants": sum_invariants(recipe).to_json(),
        "regions": jsonable(region_membership(config["chi"], config["c1sq"])),
    }
    if config.get("dissolve"):
        expr = dissolve(recipe)
        out["dissolution"] = expr.to_json() | {"description": expr.describe()}
    return out


def map_rows(chi_min: int, chi_max: int, y_indices=DEFAULT_Y_INDICES, regions: RegionConfig = RegionConfig()):
    for chi in range(chi_min, chi_max + 1):
        for c1sq in range(0, 9 * chi + 1):
            cn = from_chi_c1sq(chi, c1sq)
            try:
                recipe = plan_point(chi, c1sq, y_indices).describe()
            except Unreachable:
                recipe = ""
            tags = ";".join(sorted(region_membership(chi, c1sq, regions)))
            yield chi, c1sq, cn.e, cn.sigma, tags, recipe


def render_map(config: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(map_rows(config.get("chi_min", 1), config["chi_max"]))
    return buffer.getvalue()


def cmd_map(config: dict) -> dict:
    text = render_map(config)
    return {
        "csv_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "rows": text.count("\n") - 1,
        "columns": list(CSV_COLUMNS),
        "_csv": text,
    }


def cmd_ci(config: dict) -> dict:
    surface = MultidegreeCI(_ints(config["ambient"]), [_ints(d) for d in config["degrees"]])
    cn = ci_invariants(surface)
    K, div = canonical_vector(surface)
    parity = "spin" if div % 2 == 0 else "non-spin"
    out = {
        "ambient": list(surface.ambient.dims),
        "degrees": [list(d) for d in surface.degrees],
        "invariants": cn.to_json(),
        "canonical_vector": list(K),
        "divisibility": div,
        "spin": parity == "spin",
    }
    try:
        out["homeo_type"] = homeo_type(cn, parity).to_json()
    except GeographyError as exc:
        out["homeo_type"] = exc.to_json()
    return out


def cmd_match(config: dict) -> dict:
    bounds = SearchBounds(multiplicities=_ints(config.get("multiplicities", "2,3,5")))
    report = assemble_main_theorem(_spec(config), bounds)
    out = report.to_json()
    out["hitchin_thorpe"] = [hitchin_thorpe(x.invariants) for x in report.x_entries]
    out["replay_ok"] = report.replay()
    return out


def cmd_pq(config: dict) -> dict:
    return {"verdict": pq_structures(config["p"], config["q"]).to_json()}


def cmd_examples(config: dict) -> dict:
    checks = [c.to_json() for c in run_checks()]
    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}


COMMANDS: dict[str, Callable[[dict], dict]] = {
    "tower": cmd_tower,
    "synth": cmd_synth,
    "plan": cmd_plan,
    "map": cmd_map,
    "ci": cmd_ci,
    "match": cmd_match,
    "pq": cmd_pq,
    "examples": cmd_examples,
}


def run(config: dict) -> dict:
    """Execute a configuration and wrap the result in a versioned report."""
    result = COMMANDS[config["command"]](config)
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": config["command"],
        "seed": config["seed"],
        "config": config,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "result": jsonable(result),
    }


def canonical(report: dict) -> str:
    """Serialized report without the timestamp, for replay comparison."""
    return json.dumps({k: v for k, v in report.items() if k != "timestamp"}, sort_keys=True)


# ---------------------------------------------------------------- argument parsing


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        seed = int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None
    if not 0 <= seed < 2**64:
        raise InputError(f"{SEED_ENV} must be a 64-bit unsigned integer")
    return seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fourgeo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        return p

    p = add("tower", "invariants of an iterated branched cover")
    p.add_argument("--stages", required=True, help="d:m pairs, e.g. 2:3,5:1")

    for name, help_text in (("synth", "synthesize k homeomorphic towers"), ("match", "main theorem instance")):
        p = add(name, help_text)
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--mu", required=True, help="comma-separated rationals summing to 1")
        p.add_argument("--delta", default="1/32")
        p.add_argument("--alpha", default="auto")
        p.add_argument("--m0", default="auto")
        p.add_argument("--parity", choices=("odd", "even"), default="odd")
        if name == "match":
            p.add_argument("--multiplicities", default="2,3,5")

    p = add("plan", "recipe realizing (chi, c1^2)")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--c1sq", type=int, required=True)
    p.add_argument("--y-max-index", type=int, default=DEFAULT_Y_INDICES[-1])
    p.add_argument("--dissolve", action="store_true")

    p = add("map", "CSV geography map")
    p.add_argument("--chi-min", type=int, default=1)
    p.add_argument("--chi-max", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("ci", "complete intersection in a product of projective spaces")
    p.add_argument("--ambient", required=True, help="dimensions, e.g. 1,2")
    p.add_argument("--degrees", action="append", required=True, help="one multidegree per hypersurface")

    p = add("pq", "Einstein verdict for pCP2 # qCP2bar")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    add("examples", "replay the reference-value regression checks")

    p = sub.add_parser("replay", help="re-run a report and compare")
    p.add_argument("report")
    return parser


def _config(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("out",) and v is not None}
    config["seed"] = args.seed if args.seed is not None else _default_seed()
    return config


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _replay(path: str) -> int:
    with open(path) as fh:
        original = json.load(fh)
    if original.get("schema") != SCHEMA:
        raise InputError(f"unsupported report schema {original.get('schema')!r}")
    fresh = run(original["config"])
    if fresh["command"] == "map":
        text = fresh["result"].pop("_csv")
        if "csv" in original["result"]:
            fresh["result"]["csv"] = text
    fresh = json.loads(json.dumps(fresh))
    same = canonical(fresh) == canonical(original)
    print(json.dumps({"replay": "match" if same else "mismatch", "report": path}))
    return 0 if same else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            return _replay(args.report)
        config = _config(args)
        report = run(config)
        if args.command == "map":
            text = report["result"].pop("_csv")
            if config.get("format", "csv") == "csv":
                _emit(text, args.out)
                if args.out:
                    _emit(json.dumps(report, indent=2) + "\n", args.out + ".json")
                return 0
            report["result"]["csv"] = text
        _emit(json.dumps(report, indent=2) + "\n", args.out)
        if args.command == "examples" and not report["result"]["all_passed"]:
            return 1
        return 0
    except GeographyError as exc:
        print(json.dumps(exc.to_json()))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
