"""Command line entry point: ``critmon <command> ...``"""

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import jax

from . import numsgp
from .groebner import verify_groebner
from .invariants import invariant_report
from .northcott import (
    NorthcottExponents,
    betti_degrees,
    binomials,
    monoid_presentation,
    saturation_index,
    validate,
)
from .search import SearchConfig, random_instances
from .utils import parse_int_list
from .version import __version__

logger = logging.getLogger(__name__)

SCHEMA = "critmon-1"
EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_CHECK_FAILED = 3

REPORT_KEYS = (
    "generators",
    "invariant_factors",
    "is_numerical",
    "is_prime",
    "apery",
    "frobenius",
    "pf",
    "type",
    "genus",
    "delta_min",
    "delta_max",
    "catenary",
    "wilf_margin",
    "uniquely_presented",
    "is_critical",
)


def _threads() -> int:
    value = os.environ.get("CRITMON_THREADS")
    if value is None:
        return min(8, os.cpu_count() or 1)
    try:
        threads = int(value)
    except ValueError:
        raise ValueError(f"CRITMON_THREADS must be an integer, got {value!r}")
    if threads < 1:
        raise ValueError("CRITMON_THREADS must be at least 1")
    return threads


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _load_instances(path: str) -> Tuple[List[Dict[str, Any]], bool]:
    """Parse one JSON instance, or JSON Lines; the flag tells which."""
    text = _read_text(path).strip()
    if not text:
        raise ValueError(f"no instance found in {path}")
    try:
        return [json.loads(text)], False
    except json.JSONDecodeError:
        pass
    records = []
    for k, line in enumerate(text.splitlines()):
        if line.strip():
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {k + 1}: {exc}")
    return records, True


def _instance_from_args(args) -> NorthcottExponents:
    if getattr(args, "instance", None):
        records, _ = _load_instances(args.instance)
        if len(records) != 1:
            raise ValueError(f"expected one instance, found {len(records)}")
        return NorthcottExponents.from_json(records[0])
    if None in (args.n, args.diag, args.xn, args.mvec):
        raise ValueError("give --instance FILE or all of --n --diag --xn --mvec")
    return validate(
        args.n, parse_int_list(args.diag), parse_int_list(args.xn), parse_int_list(args.mvec)
    )


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def _emit(data, out: Optional[str] = None):
    _write(json.dumps(data, indent=2), out)


def _emit_lines(records, out: Optional[str] = None):
    _write("\n".join(json.dumps(r) for r in records), out)


def _oracle_values(S: numsgp.NumericalSemigroup, a_n: int) -> Dict[str, Any]:
    basic = numsgp.basic_invariants(S)
    fac = numsgp.delta_and_catenary(S)
    return {
        "minimal_generators": list(S.minimal_generators),
        "betti_elements": list(numsgp.betti_elements(S)),
        "apery": list(numsgp.apery(S, a_n)),
        "frobenius": basic.frobenius,
        "pf": list(basic.pseudo_frobenius),
        "type": basic.type,
        "genus": basic.genus,
        "delta_min": fac.delta_min,
        "delta_max": fac.delta_max,
        "catenary": fac.catenary,
        "wilf_margin": numsgp.wilf_margin(S),
        "uniquely_presented": numsgp.is_uniquely_presented(S),
        "is_critical": numsgp.is_critical(S),
    }


def run_report(
    e: NorthcottExponents, oracle: bool = False, timings: bool = False
) -> Dict[str, Any]:
    """
    Report on one instance. Closed-form values are ``None`` when the
    instance is not numerical; with ``oracle`` they are recomputed from the
    generators and any disagreement is listed under ``mismatches``.
    """
    clock = {}
    t0 = time.perf_counter()
    pres = monoid_presentation(e)
    sat = saturation_index(e, pres)
    report = dict.fromkeys(REPORT_KEYS)
    report.update(
        generators=pres.to_json()["generators"],
        invariant_factors=list(pres.invariant_factors),
        is_numerical=pres.is_numerical,
        is_prime=sat.is_prime,
    )
    clock["presentation"] = time.perf_counter() - t0
    if pres.is_numerical:
        t0 = time.perf_counter()
        inv = invariant_report(e, pres)
        report.update(
            apery=list(inv.apery),
            frobenius=inv.frobenius,
            pf=list(inv.pseudo_frobenius),
            type=inv.type,
            genus=inv.genus,
            delta_min=inv.delta_min,
            delta_max=inv.delta_max,
            catenary=inv.catenary,
            wilf_margin=inv.wilf_margin,
            uniquely_presented=True,
            is_critical=True,
        )
        clock["closed_forms"] = time.perf_counter() - t0
    out = {"schema": SCHEMA, "instance": e.to_json(), "report": report}
    if oracle and pres.is_numerical:
        t0 = time.perf_counter()
        S = numsgp.from_generators(pres.weight)
        values = _oracle_values(S, pres.weight[-1])
        expected = dict(report)
        expected["minimal_generators"] = list(pres.weight)
        expected["betti_elements"] = sorted(betti_degrees(e, pres))
        mismatches = [k for k, v in values.items() if v != expected[k]]
        if mismatches:
            logger.error("instance %s: oracle disagrees on %s", e.to_json(), mismatches)
        out["oracle"] = {"values": values, "mismatches": mismatches}
        clock["oracle"] = time.perf_counter() - t0
    if timings:
        out["timings"] = clock
    return out


def cmd_construct(args) -> int:
    e = _instance_from_args(args)
    pres = monoid_presentation(e)
    sat = saturation_index(e, pres)
    data = {
        "schema": SCHEMA,
        "instance": e.to_json(),
        "binomials": binomials(e).formatted(),
        "presentation": pres.to_json(),
        "saturation_index": sat.index,
        "is_prime": sat.is_prime,
    }
    _emit(data, args.out)
    return EXIT_OK


def _report_one(record, oracle: bool, timings: bool) -> Dict[str, Any]:
    try:
        e = NorthcottExponents.from_json(record)
    except (ValueError, TypeError) as exc:
        return {"schema": SCHEMA, "error": str(exc)}
    return run_report(e, oracle, timings)


def cmd_invariants(args) -> int:
    if args.instance:
        records, lines = _load_instances(args.instance)
    else:
        records, lines = [_instance_from_args(args).to_json()], False
    threads = _threads()
    logger.info("reporting on %d instances with %d threads", len(records), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(
            pool.map(lambda r: _report_one(r, args.oracle, args.timings), records)
        )
    if lines:
        _emit_lines(results, args.out)
    else:
        _emit(results[0], args.out)
    if any("error" in r for r in results):
        return EXIT_BAD_INPUT
    if any(r.get("oracle", {}).get("mismatches") for r in results):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_glue(args) -> int:
    S1 = numsgp.from_generators(parse_int_list(args.s1))
    S2 = numsgp.from_generators(parse_int_list(args.s2))
    gluing = numsgp.glue(S1, S2, args.lam, args.mu)
    S = gluing.semigroup
    data = {
        "schema": SCHEMA,
        "generators": list(S.minimal_generators),
        "parts": [list(p) for p in gluing.parts],
        "relation": [list(r) for r in gluing.relation],
        "s1_is_critical": numsgp.is_critical(S1),
        "is_critical": numsgp.is_critical(S),
        "uniquely_presented": numsgp.is_uniquely_presented(S),
        "gluings": [[list(a), list(b)] for a, b in numsgp.detect_gluing(S)],
    }
    _emit(data, args.out)
    return EXIT_OK


def cmd_presentation(args) -> int:
    S = numsgp.from_generators(parse_int_list(args.gens))
    data = {"schema": SCHEMA}
    data.update(numsgp.betti_and_presentation(S).to_json())
    data.update(
        frobenius=S.frobenius,
        critical_exponents=list(numsgp.critical_exponents(S)),
        is_critical=numsgp.is_critical(S),
        gluings=[[list(a), list(b)] for a, b in numsgp.detect_gluing(S)],
    )
    _emit(data, args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    config = SearchConfig(
        n=args.n,
        max_exp=args.max_exp,
        count=args.count,
        numerical_only=args.numerical_only,
        max_an=args.max_an,
        mvec_ones=args.mvec_ones,
    )
    instances = random_instances(jax.random.PRNGKey(args.seed), config)
    _emit_lines([e.to_json() for e in instances], args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    e = _instance_from_args(args)
    result = verify_groebner(e, tiebreak=args.tiebreak)
    data = {"schema": SCHEMA, "instance": e.to_json()}
    data.update(result.to_json())
    _emit(data, args.out)
    return EXIT_OK if result.is_basis else EXIT_CHECK_FAILED


def _add_instance_args(p):
    p.add_argument("--instance", help="JSON file with n, diag, xn, mvec ('-' for stdin)")
    p.add_argument("--n", type=int, help="number of variables")
    p.add_argument("--diag", help="comma-separated exponents u_{n,i}")
    p.add_argument("--xn", help="comma-separated exponents u_{i,n}")
    p.add_argument("--mvec", help="comma-separated cyclic exponents")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="critmon",
        description="Northcott-type binomial systems and their numerical semigroups.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="count", default=0)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="binomials and presented monoid of an instance", parents=[common])
    _add_instance_args(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("invariants", help="closed-form invariants, optionally checked", parents=[common])
    _add_instance_args(p)
    p.add_argument("--oracle", action="store_true", help="recompute from the generators")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("glue", help="glue two numerical semigroups", parents=[common])
    p.add_argument("--s1", required=True, help="generators of S1, e.g. 3,5,7")
    p.add_argument("--s2", required=True, help="generators of S2")
    p.add_argument("--lam", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("presentation", help="Betti elements and a minimal presentation", parents=[common])
    p.add_argument("--gens", required=True, help="generators, e.g. 11,13,14,15,19")
    p.set_defaults(func=cmd_presentation)

    p = sub.add_parser("search", help="random instances as JSON Lines", parents=[common])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--max-exp", type=int, default=3)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--numerical-only", action="store_true")
    p.add_argument("--mvec-ones", action="store_true")
    p.add_argument("--max-an", type=int, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check the binomials form a Gröbner basis", parents=[common])
    _add_instance_args(p)
    p.add_argument("--tiebreak", choices=("revlex", "lex"), default="revlex")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except RuntimeError as exc:
        logger.error("consistency check failed: %s", exc)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
