"""Batch command-line front end over structured JSON jobs.

One job per invocation: a JSON document (stdin or ``--in``) selects a
command and its parameters, and a JSON report is written to stdout or
``--out``.  Output is deterministic for a fixed (job, seed) pair: every
collection is emitted in a canonical sort order and keys are sorted, so
reports are byte-identical across runs.  Each report carries an
``anchor`` string naming the library operation it exercised, so results
can be traced back to the function they certify.

Exit codes: 0 success, 2 malformed job (schema), 3 depth gate violated,
4 verification failure, 1 any other library rejection.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import random
import sys
from importlib import resources

import jsonschema

from .alcove import TypePresentation, serre_highest_weight, to_graph
from .algebra import (
    LEMMA_COUNT,
    StructureConstants,
    fibre_rows,
    verify_components,
    verify_lemma,
)
from .classify import (
    NEW_SPECIALIZATION,
    NEW_WEIGHT,
    SIMPLE_REFLECTIONS,
    classify_case,
    close_sp,
    sp_fixed,
    theta,
    w_obv,
    wg_from_case,
)
from .errors import DepthError, Gl3swError, SchemaError, VerificationFailure
from .shapes import cell_assignment, chart_row, in_admissible, iwahori_decompose, universal_matrix
from .weightsets import default_base, jh_outer, jh_set, w_question
from .weyl import ALL_PERMS, AffElt, ProductElt, admissible_set, finite, length, translation

COMMANDS = ("jh", "wquestion", "classify", "walk", "shape", "admissible", "verify-tables")

_DEFAULT_FIXED_POINT = ({"nu": [14, 7, 0], "perm": [0, 1, 2]},)
_DEFAULT_FIXED_PRIME = 23


# ---------------------------------------------------------------------------
# schema handling
# ---------------------------------------------------------------------------


def load_schema(name):
    """A packaged JSON schema, parsed and checked against its metaschema."""
    text = resources.files("gl3sw.schemas").joinpath(name).read_text()
    schema = json.loads(text)
    jsonschema.Draft202012Validator.check_schema(schema)
    return schema


def validate_job(doc):
    """Schema-validate a raw job document; raises SchemaError."""
    if not isinstance(doc, dict):
        raise SchemaError("job document must be a JSON object")
    validator = jsonschema.Draft202012Validator(load_schema("job.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        path = "/".join(str(part) for part in first.absolute_path) or "<root>"
        raise SchemaError(f"invalid job at {path}: {first.message}")
    return doc


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _aff_json(x):
    return {"nu": list(x.trans), "perm": list(x.perm)}


def _product_json(x):
    return [_aff_json(part) for part in x.parts]


def _graph_json(g):
    return {"eps": list(g.eps), "digit": g.digit}


def _weight_json(w, lam, p):
    return {
        "w1": _product_json(w.w1),
        "omega": [list(om) for om in w.omega],
        "graph": [_graph_json(g) for g in to_graph(w, lam)],
        "highest_weight": [list(hw) for hw in serre_highest_weight(w, p)],
    }


def _weight_sort_key(entry):
    return json.dumps(entry, sort_keys=True)


def _parse_vector(v):
    return tuple(int(c) for c in v)


def _parse_aff(doc):
    nu = _parse_vector(doc["nu"])
    perm = tuple(doc.get("perm", (0, 1, 2)))
    if sorted(perm) != [0, 1, 2]:
        raise SchemaError(f"not a permutation of (0,1,2): {perm!r}")
    return translation(nu) * finite(perm)


def _parse_product(items):
    return ProductElt(tuple(_parse_aff(doc) for doc in items))


def _parse_type(params):
    s = params["s"]
    mu = params["mu"]
    if len(s) != len(mu):
        raise SchemaError("params s and mu must have the same number of components")
    for perm in s:
        if sorted(perm) != [0, 1, 2]:
            raise SchemaError(f"not a permutation of (0,1,2): {perm!r}")
    stilde = ProductElt(tuple(finite(tuple(perm)) for perm in s))
    return TypePresentation(stilde, tuple(_parse_vector(m) for m in mu), params["p"])


# ---------------------------------------------------------------------------
# branch oracles for the walk commands
# ---------------------------------------------------------------------------


def _perm_rank(perm):
    return sorted(ALL_PERMS).index(tuple(perm))


def _reflection_rank(s):
    for i, ref in enumerate(SIMPLE_REFLECTIONS):
        if ref == s:
            return i
    return len(SIMPLE_REFLECTIONS)


def _make_oracle(spec):
    """A deterministic branch oracle from its job description.

    A string selects a constant branch.  A bit list is keyed on the
    walk position (theta image and reflection used), not on call order,
    so the oracle is a function of the walk state alone.
    """
    if spec is None:
        spec = NEW_WEIGHT
    if isinstance(spec, str):
        branch = {
            "new_weight": NEW_WEIGHT,
            "new_specialization": NEW_SPECIALIZATION,
        }.get(spec)
        if branch is None:
            raise SchemaError(f"unknown oracle {spec!r}")
        return lambda sp, s: branch
    bits = [int(b) for b in spec]
    if not bits or any(b not in (0, 1) for b in bits):
        raise SchemaError("oracle bits must be a non-empty list of 0/1")

    def oracle(sp, s):
        perms = theta(sp)
        rank = 0
        for perm in perms:
            rank = rank * len(ALL_PERMS) + _perm_rank(perm)
        rank = rank * (len(SIMPLE_REFLECTIONS) + 1) + _reflection_rank(s)
        return NEW_WEIGHT if bits[rank % len(bits)] else NEW_SPECIALIZATION

    return oracle


def _closure_from_params(params):
    p = params.get("p", _DEFAULT_FIXED_PRIME)
    x = _parse_product(params.get("x", _DEFAULT_FIXED_POINT))
    lam = tuple(part.trans for part in x.parts)
    seeds = sorted(
        sp_fixed(x, p),
        key=lambda sp: _weight_sort_key(_weight_json(sp.weight, lam, p)),
    )
    if not seeds:
        raise DepthError("fixed point admits no specialization pairs at this prime")
    seed_sp = seeds[params.get("seed_index", 0) % len(seeds)]
    closure = close_sp(seed_sp, _make_oracle(params.get("oracle")))
    return p, x, lam, seed_sp, closure


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_jh(params, seed, jobs):
    tau = _parse_type(params)
    lam = params.get("lam")
    lam = tuple(_parse_vector(v) for v in lam) if lam is not None else default_base(tau.mu)
    exact = params.get("exact", True)
    full = jh_set(tau, lam=lam, exact=exact)
    outer = jh_outer(tau, lam=lam, exact=exact)
    entries = []
    for w in full:
        entry = _weight_json(w, lam, tau.p)
        entry["outer"] = w in outer
        entries.append(entry)
    entries.sort(key=_weight_sort_key)
    result = {
        "p": tau.p,
        "f": tau.f,
        "base": [list(v) for v in lam],
        "count": len(entries),
        "outer_count": sum(e["outer"] for e in entries),
        "weights": entries,
    }
    return "gl3sw.weightsets.jh_set", result


def _cmd_wquestion(params, seed, jobs):
    tau = _parse_type(params)
    lam = params.get("lam")
    lam = tuple(_parse_vector(v) for v in lam) if lam is not None else default_base(tau.mu)
    candidates = w_question(tau, lam=lam)
    entries = sorted(
        (_weight_json(w, lam, tau.p) for w in candidates), key=_weight_sort_key
    )
    result = {
        "p": tau.p,
        "f": tau.f,
        "base": [list(v) for v in lam],
        "count": len(entries),
        "weights": entries,
    }
    return "gl3sw.weightsets.w_question", result


def _cmd_classify(params, seed, jobs):
    p, x, lam, seed_sp, closure = _closure_from_params(params)
    descriptor = classify_case(closure)
    obvious = sorted(
        (_weight_json(w, lam, p) for w in w_obv(closure)), key=_weight_sort_key
    )
    predicted = sorted(
        (_weight_json(w, lam, p) for w in wg_from_case(descriptor)),
        key=_weight_sort_key,
    )
    result = {
        "p": p,
        "x": _product_json(x),
        "case_ids": list(descriptor.case_ids),
        "sub_variants": [list(v) if isinstance(v, tuple) else v for v in descriptor.sub_variants],
        "closure_size": len(closure),
        "obvious_weights": obvious,
        "obvious_count": len(obvious),
        "predicted_weights": predicted,
        "predicted_count": len(predicted),
    }
    return "gl3sw.classify.classify_case", result


def _cmd_walk(params, seed, jobs):
    p, x, lam, seed_sp, closure = _closure_from_params(params)
    pairs = []
    for sp in closure:
        pairs.append(
            {
                "theta": [list(perm) for perm in theta(sp)],
                "weight": _weight_json(sp.weight, lam, p),
            }
        )
    pairs.sort(key=_weight_sort_key)
    thetas = [tuple(tuple(t) for t in entry["theta"]) for entry in pairs]
    result = {
        "p": p,
        "x": _product_json(x),
        "seed_pair": _weight_json(seed_sp.weight, lam, p),
        "closure_size": len(pairs),
        "theta_injective": len(set(thetas)) == len(thetas),
        "pairs": pairs,
    }
    return "gl3sw.classify.close_sp", result


def _cmd_shape(params, seed, jobs):
    p = params["p"]
    if "z" in params:
        z = _parse_aff(params["z"])
    elif "row" in params:
        z = chart_row(params["row"]).elt
    else:
        raise SchemaError("shape command needs either a row label or an explicit z")
    assignment = params.get("assignment")
    if assignment is None:
        assignment = cell_assignment(z, random.Random(seed), p)
    else:
        assignment = {str(k): int(v) % p for k, v in assignment.items()}
    matrix = universal_matrix(z, assignment, p)
    decomposition = iwahori_decompose(matrix)
    result = {
        "p": p,
        "z": _aff_json(z),
        "assignment": dict(sorted(assignment.items())),
        "shape": _aff_json(decomposition.elt),
        "valuations": list(decomposition.valuations),
        "matches_input": decomposition.elt == z,
        "admissible": in_admissible(decomposition.elt),
    }
    return "gl3sw.shapes.iwahori_decompose", result


def _cmd_admissible(params, seed, jobs):
    convention = params.get("convention", "dominant")
    elements = sorted(
        admissible_set(convention),
        key=lambda x: (length(x, convention), x.trans, x.perm),
    )
    result = {
        "convention": convention,
        "count": len(elements),
        "elements": [
            {**_aff_json(x), "length": length(x, convention)} for x in elements
        ],
    }
    return "gl3sw.weyl.admissible_set", result


def _verify_point(args):
    """All table records for one structure-constant sample (worker-safe)."""
    rows, twists, lemmas, abc_p = args
    sc = StructureConstants(*abc_p)
    records = []
    for label in rows:
        for twist in twists:
            try:
                report = verify_components(label, sc, twist=twist)
                report["passed"] = True
            except VerificationFailure as exc:
                report = {
                    "row": label,
                    "twist": twist,
                    "p": sc.p,
                    "abc": [sc.a, sc.b, sc.c],
                    "passed": False,
                    "failure": str(exc),
                }
            records.append(report)
    verdicts = []
    if lemmas:
        for k in range(1, LEMMA_COUNT + 1):
            verdicts.append(
                {
                    "lemma": k,
                    "p": sc.p,
                    "abc": [sc.a, sc.b, sc.c],
                    "verdict": verify_lemma(k, sc),
                }
            )
    return records, verdicts


def _cmd_verify_tables(params, seed, jobs):
    rows = params.get("rows", "all")
    rows = tuple(fibre_rows()) if rows == "all" else tuple(rows)
    unknown = set(rows) - set(fibre_rows())
    if unknown:
        raise SchemaError(f"unknown rows: {sorted(unknown)}")
    primes = tuple(params.get("primes", (11, 13, 17)))
    samples = params.get("samples", 5)
    lemmas = params.get("lemmas", True)
    twists = tuple(params.get("twists", (0,)))

    points = []
    for p in primes:
        rng = random.Random(f"{seed}:{p}")
        for _ in range(samples):
            sc = StructureConstants.random_generic(rng, p)
            points.append((rows, twists, lemmas, (sc.a, sc.b, sc.c, sc.p)))

    if jobs > 1 and len(points) > 1:
        with multiprocessing.Pool(min(jobs, len(points))) as pool:
            outcomes = pool.map(_verify_point, points)
    else:
        outcomes = [_verify_point(point) for point in points]

    records = [record for recs, _ in outcomes for record in recs]
    verdicts = [verdict for _, verds in outcomes for verdict in verds]
    all_true = all(r["passed"] for r in records) and all(
        v["verdict"] for v in verdicts
    )
    component_ok = [
        r["passed"] and r.get("intersection_equals_ideal") in (True, None)
        for r in records
    ]
    result = {
        "rows": list(rows),
        "primes": list(primes),
        "samples": samples,
        "twists": list(twists),
        "records": records,
        "lemma_verdicts": verdicts,
        "all_true": all_true and all(component_ok),
    }
    return "gl3sw.algebra.verify_components;gl3sw.algebra.verify_lemma", result


_HANDLERS = {
    "jh": _cmd_jh,
    "wquestion": _cmd_wquestion,
    "classify": _cmd_classify,
    "walk": _cmd_walk,
    "shape": _cmd_shape,
    "admissible": _cmd_admissible,
    "verify-tables": _cmd_verify_tables,
}


def run(job, jobs=1):
    """Execute a validated job document and return the report."""
    doc = validate_job(job)
    command = doc["command"]
    seed = doc.get("seed", 0)
    params = doc.get("params", {})
    anchor, result = _HANDLERS[command](params, seed, jobs)
    return {"command": command, "seed": seed, "anchor": anchor, "result": result}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="gl3sw",
        description="Batch runner for GL3 Serre-weight combinatorics jobs.",
    )
    parser.add_argument("--in", dest="infile", help="job JSON file (default: stdin)")
    parser.add_argument("--out", dest="outfile", help="report file (default: stdout)")
    parser.add_argument("--seed", type=int, help="override the job's seed")
    parser.add_argument(
        "--jobs", type=int, default=1, help="parallel workers for verify-tables"
    )
    args = parser.parse_args(argv)

    try:
        if args.infile:
            with open(args.infile, encoding="utf-8") as handle:
                raw = handle.read()
        else:
            raw = sys.stdin.read()
        try:
            job = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"job document is not valid JSON: {exc}") from exc
        if args.seed is not None:
            if not isinstance(job, dict):
                raise SchemaError("job document must be a JSON object")
            job["seed"] = args.seed
        report = run(job, jobs=max(1, args.jobs))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except DepthError as exc:
        print(f"depth error: {exc}", file=sys.stderr)
        return 3
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 4
    except (Gl3swError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)

    if report["command"] == "verify-tables" and not report["result"]["all_true"]:
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
