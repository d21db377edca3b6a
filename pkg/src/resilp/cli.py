"""Batch command-line front end.

Subcommands: encode, check, oracle, gen, gen-random.  Stdout carries the
payload (JSON with sorted keys by default, or an indented text rendering
with --format text), stderr carries diagnostics.  Exit codes: 0 = yes /
resilient, 1 = no / not resilient, 2 = error, 3 = engine/oracle or
generator/source disagreement.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
import traceback
from typing import Dict, List, Optional, Tuple

from . import bribery, closest_string, scheduling, setcover
from .engine import (
    ResiliencySystem,
    check_resiliency,
    enumerate_scenarios,
    substitute,
)
from .errors import ArgumentError, ResilpError, ValidationError
from .ilp import IntAssignment, solve_feasibility
from .jsonio import (
    assignment_to_dict,
    resiliency_from_dict,
    resiliency_to_dict,
    verdict_to_dict,
)
from .oracles import (
    bribery_oracle,
    forall_exists_oracle,
    hitting_set_oracle,
    matching_3dm_oracle,
    rcs_oracle,
    rdscp_oracle,
    sched_oracle,
)
from .sampling import (
    random_bribery,
    random_rcs,
    random_rdscp,
    random_sched,
    random_system,
)

PROBLEMS = ("rdscp", "rcs", "sched", "bribery", "policy")


# ---------------------------------------------------------------- plumbing


def _read_doc(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    return json.loads(text)


def _scalar(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def _render_text(value, indent: str = "") -> List[str]:
    lines: List[str] = []
    if isinstance(value, dict):
        for key in sorted(value):
            sub = value[key]
            if isinstance(sub, (dict, list)) and sub:
                lines.append(f"{indent}{key}:")
                lines.extend(_render_text(sub, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {_scalar(sub)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{indent}-")
                lines.extend(_render_text(item, indent + "  "))
            else:
                lines.append(f"{indent}- {_scalar(item)}")
    else:
        lines.append(f"{indent}{_scalar(value)}")
    return lines


def _emit(doc, fmt: str) -> None:
    if fmt == "text":
        print("\n".join(_render_text(doc)))
    else:
        print(json.dumps(doc, sort_keys=True, indent=2))


# ------------------------------------------------------- problem dispatch


def _load_instance(problem: str, doc):
    if problem == "rdscp":
        return setcover.RdscpInstance.from_dict(doc)
    if problem == "policy":
        return setcover.from_policy(setcover.AuthorizationPolicy.from_dict(doc))
    if problem == "rcs":
        inst, _ = closest_string.instance_from_dict(doc)
        return inst
    if problem == "sched":
        return scheduling.SchedulingInstance.from_dict(doc)
    if problem == "bribery":
        return bribery.BriberyInstance.from_dict(doc)
    raise ArgumentError(f"unknown problem {problem!r}")


def _encode_instance(problem: str, inst, args) -> ResiliencySystem:
    if problem in ("rdscp", "policy"):
        return setcover.encode(inst, max_patterns=args.max_patterns)
    if problem == "rcs":
        return closest_string.encode(
            inst, per_row_distance=not args.aggregate_distance
        )
    if problem == "sched":
        return scheduling.encode(inst)
    return bribery.encode(inst)


def _oracle_answer(problem: str, inst, args) -> bool:
    if problem in ("rdscp", "policy"):
        return rdscp_oracle(inst)
    if problem == "rcs":
        return rcs_oracle(inst, per_row_distance=not args.aggregate_distance)
    if problem == "sched":
        return sched_oracle(inst, max_points=args.max_points)
    return bribery_oracle(inst)


def _census_doc(census: Dict[Tuple[int, ...], int]) -> Dict[str, int]:
    return {
        "".join(str(c) for c in order): count
        for order, count in census.items()
        if count
    }


def _moves_doc(moves) -> List[dict]:
    return [
        {
            "from": "".join(str(c) for c in src),
            "to": "".join(str(c) for c in dst),
            "count": count,
        }
        for src, dst, count in moves
    ]


def _decode_payload(
    problem: Optional[str],
    inst,
    scenario: IntAssignment,
    x_values: Optional[IntAssignment],
    *,
    per_row: bool = True,
) -> dict:
    """Witness/sample scenario plus, when present, its decoded answer."""
    payload: dict = {"scenario": assignment_to_dict(scenario)}
    if problem is None:
        payload["adversary"] = None
        payload["solution"] = assignment_to_dict(x_values)
        return payload
    if problem in ("rdscp", "policy"):
        removed = setcover.decode_scenario(inst, scenario)
        payload["adversary"] = {
            "removed_indices": list(removed),
            "removed_sets": [sorted(inst.family[i]) for i in removed],
        }
        payload["solution"] = (
            [list(cover) for cover in setcover.decode_solution(inst, x_values, removed)]
            if x_values is not None
            else None
        )
    elif problem == "rcs":
        corrupted = closest_string.decode_scenario(inst, scenario)
        payload["adversary"] = {"corrupted": list(corrupted.rows)}
        payload["solution"] = (
            {
                "center": closest_string.decode_solution(
                    inst, corrupted, x_values, per_row_distance=per_row
                )
            }
            if x_values is not None
            else None
        )
    elif problem == "sched":
        delays = scheduling.decode_scenario(inst, scenario)
        payload["adversary"] = {"delays": list(delays)}
        payload["solution"] = (
            {"assignment": scheduling.decode_schedule(inst, delays, x_values)}
            if x_values is not None
            else None
        )
    else:
        moves, after = bribery.decode_bribery(inst, "adversary", scenario)
        payload["adversary"] = {
            "moves": _moves_doc(moves),
            "census_after": _census_doc(after),
        }
        if x_values is not None:
            rmoves, final = bribery.decode_bribery(
                inst, "response", x_values, pre_census=after
            )
            payload["solution"] = {
                "moves": _moves_doc(rmoves),
                "census_after": _census_doc(final),
            }
        else:
            payload["solution"] = None
    return payload


def _build_decode(problem, inst, system, verdict, *, per_row: bool):
    if verdict.resilient:
        scenario = next(enumerate_scenarios(system), None)
        if scenario is None:
            return None
        x_values = solve_feasibility(substitute(system, scenario))
        assert x_values is not None, "resilient verdict with an unanswerable scenario"
        return _decode_payload(problem, inst, scenario, x_values, per_row=per_row)
    return _decode_payload(problem, inst, verdict.witness_z, None, per_row=per_row)


# ------------------------------------------------------------ subcommands


def cmd_encode(args) -> int:
    doc = _read_doc(args.instance)
    inst = _load_instance(args.problem, doc)
    system = _encode_instance(args.problem, inst, args)
    out = resiliency_to_dict(system)
    if args.kappa:
        blob = json.dumps(out, sort_keys=True)
        print(
            f"kappa={system.kappa} size_bytes={len(blob.encode('utf-8'))}",
            file=sys.stderr,
        )
    _emit(out, args.format)
    return 0


def cmd_check(args) -> int:
    doc = _read_doc(args.instance)
    if args.raw:
        problem, inst = None, None
        system = resiliency_from_dict(doc)
    else:
        problem = args.problem
        inst = _load_instance(problem, doc)
        system = _encode_instance(problem, inst, args)

    start = time.perf_counter()
    verdict = check_resiliency(system, max_scenarios=args.max_scenarios)
    report = {
        "verdict": verdict_to_dict(verdict),
        "kappa": system.kappa,
        "wall_time": round(time.perf_counter() - start, 6),
    }
    code = 0 if verdict.resilient else 1

    if args.oracle:
        if args.raw:
            answer = forall_exists_oracle(system, max_points=args.max_points)
        else:
            answer = _oracle_answer(problem, inst, args)
        report["oracle"] = answer
        if answer != verdict.resilient:
            print(
                f"disagreement: engine={verdict.resilient} oracle={answer}",
                file=sys.stderr,
            )
            code = 3
    if args.exhaustive:
        answer = forall_exists_oracle(system, max_points=args.max_points)
        report["exhaustive"] = answer
        if answer != verdict.resilient:
            print(
                f"disagreement: engine={verdict.resilient} exhaustive={answer}",
                file=sys.stderr,
            )
            code = 3
    if args.decode:
        report["decoded"] = _build_decode(
            problem,
            inst,
            system,
            verdict,
            per_row=not getattr(args, "aggregate_distance", False),
        )
    _emit(report, args.format)
    return code


def cmd_oracle(args) -> int:
    doc = _read_doc(args.instance)
    start = time.perf_counter()
    if args.raw:
        answer = forall_exists_oracle(
            resiliency_from_dict(doc), max_points=args.max_points
        )
    else:
        answer = _oracle_answer(args.problem, _load_instance(args.problem, doc), args)
    report = {
        "answer": answer,
        "wall_time": round(time.perf_counter() - start, 6),
    }
    _emit(report, args.format)
    return 0 if answer else 1


def _require(doc, key, kind, where):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ValidationError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def cmd_gen(args) -> int:
    doc = _read_doc(args.source)
    if args.reduction == "hitting-set":
        n = _require(doc, "n", int, "hitting-set source")
        k = _require(doc, "k", int, "hitting-set source")
        raw_sets = _require(doc, "sets", list, "hitting-set source")
        sets = [tuple(int(v) for v in entry) for entry in raw_sets]
        inst = setcover.gen_from_hitting_set(n, sets, k)
        expected = not hitting_set_oracle(n, sets, k)
    else:
        n = _require(doc, "n", int, "3dm source")
        k = _require(doc, "k", int, "3dm source")
        raw_triples = _require(doc, "triples", list, "3dm source")
        triples = []
        for entry in raw_triples:
            if len(entry) != 3:
                raise ValidationError("3dm source: each triple needs 3 entries")
            triples.append(tuple(int(v) for v in entry))
        inst = setcover.gen_from_3dm(n, triples, k)
        expected = matching_3dm_oracle(n, triples, k)

    code = 0
    if args.verify:
        got = rdscp_oracle(inst)
        if got != expected:
            print(
                f"verification failed: source implies {expected}, "
                f"generated instance answers {got}",
                file=sys.stderr,
            )
            code = 3
        else:
            print(f"verified: both sides answer {got}", file=sys.stderr)
    _emit(inst.to_dict(), args.format)
    return code


def cmd_gen_random(args) -> int:
    generators = {
        "system": random_system,
        "rdscp": random_rdscp,
        "rcs": random_rcs,
        "sched": random_sched,
        "bribery": random_bribery,
    }
    rng = random.Random(args.seed)
    gen = generators[args.family]
    docs = []
    for _ in range(args.count):
        thing = gen(rng)
        docs.append(
            resiliency_to_dict(thing) if args.family == "system" else thing.to_dict()
        )
    _emit(docs[0] if args.count == 1 else docs, args.format)
    return 0


# ----------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "text"), default="json",
        help="output rendering (default json, sorted keys)",
    )

    parser = argparse.ArgumentParser(
        prog="resilp",
        description="Encode, check, and cross-check resiliency instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", parents=[common], help="instance -> system JSON")
    enc.add_argument("--problem", choices=PROBLEMS, required=True)
    enc.add_argument("instance", help="instance JSON file, or - for stdin")
    enc.add_argument("--kappa", action="store_true",
                     help="print kappa and payload size to stderr")
    enc.add_argument("--max-patterns", type=int, default=None)
    enc.add_argument("--aggregate-distance", action="store_true",
                     help="rcs only: one total-distance row instead of per-row rows")
    enc.set_defaults(func=cmd_encode)

    chk = sub.add_parser("check", parents=[common], help="decide resiliency")
    which = chk.add_mutually_exclusive_group(required=True)
    which.add_argument("--problem", choices=PROBLEMS)
    which.add_argument("--raw", action="store_true",
                       help="input is a ResiliencySystem JSON, not an instance")
    chk.add_argument("instance", help="JSON file, or - for stdin")
    chk.add_argument("--oracle", action="store_true",
                     help="also run the matching reference decider; exit 3 on mismatch")
    chk.add_argument("--exhaustive", action="store_true",
                     help="also run plain box enumeration on the system; exit 3 on mismatch")
    chk.add_argument("--decode", action="store_true",
                     help="attach a human-readable witness or sample solution")
    chk.add_argument("--max-scenarios", type=int, default=1_000_000)
    chk.add_argument("--max-points", type=int, default=10_000_000)
    chk.add_argument("--max-patterns", type=int, default=None)
    chk.add_argument("--aggregate-distance", action="store_true")
    chk.set_defaults(func=cmd_check)

    orc = sub.add_parser("oracle", parents=[common],
                         help="run only the reference decider")
    which = orc.add_mutually_exclusive_group(required=True)
    which.add_argument("--problem", choices=PROBLEMS)
    which.add_argument("--raw", action="store_true")
    orc.add_argument("instance", help="JSON file, or - for stdin")
    orc.add_argument("--max-points", type=int, default=10_000_000)
    orc.add_argument("--aggregate-distance", action="store_true")
    orc.set_defaults(func=cmd_oracle)

    gen = sub.add_parser("gen", parents=[common],
                         help="reduce a source problem to an rdscp instance")
    gen.add_argument("--reduction", choices=("hitting-set", "3dm"), required=True)
    gen.add_argument("source", help="source instance JSON file, or - for stdin")
    gen.add_argument("--verify", action="store_true",
                     help="cross-check both oracles; exit 3 on mismatch")
    gen.set_defaults(func=cmd_gen)

    rnd = sub.add_parser("gen-random", parents=[common],
                         help="seeded random instances for fuzzing")
    rnd.add_argument("--family", required=True,
                     choices=("system", "rdscp", "rcs", "sched", "bribery"))
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--count", type=int, default=1)
    rnd.set_defaults(func=cmd_gen_random)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResilpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        # exit-code contract: even a bug must land on {0,1,2,3}
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
