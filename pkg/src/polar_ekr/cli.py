"""Command line entry point: construction, verification, search, export.

Every subcommand emits a JSON report (stdout or --out) embedding the space
parameters, the tool version and the canonical ordering scheme.  Exit codes:
0 all checks passed, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time


from . import ORDERING_SCHEME, __version__, kernels
from .antidesigns import (
    chi,
    orthogonal_to_min_eigenspace,
    pairing,
    v_mspace,
    v_subspace,
    verify_all_chi_orthogonal,
    verify_mspace_sum,
    verify_subspace_scaled_sum,
)
from .counting import (
    count_by_position,
    count_extensions,
    count_flags,
    count_full_flags,
    gaussian_binomial,
    min_eigenvalue_chambers,
    min_eigenvalue_sspace,
)
from .ekr import (
    EKRSet,
    blow_up,
    build_example,
    ekr_to_json_dict,
    ratio_sharpness,
    sspaces_through_point,
    verify_ekr,
    weights,
)
from .flags import enumerate_flags, flag_type, verify_chamber_extension_counts
from .graphs import MAX_DENSE_SPECTRUM, build_graph, quotient_relation_check
from .search import max_independent_set, structure_check
from .spaces import KIND_TYPE, build_polar_space

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


def _parse_J(text: str, n: int):
    if text.strip().lower() == "all":
        return tuple(range(1, n + 1))
    try:
        return flag_type([int(t) for t in text.split(",")], n)
    except (ValueError, TypeError) as exc:
        raise SystemExit(f"invalid -J value {text!r}: {exc}")


def _base_report(space, deterministic: bool) -> dict:
    rep = {
        "version": __version__,
        "ordering": ORDERING_SCHEME,
        "params": {"kind": space.kind, "n": space.n, "q": space.q, "e": str(space.e)},
    }
    if not deterministic:
        rep["backend"] = kernels.backend_name()
    return rep


def _emit(report: dict, out_path) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _space_from_args(args):
    try:
        return build_polar_space(args.kind, args.n, args.q)
    except (ValueError, AssertionError) as exc:
        raise SystemExit(f"cannot build space: {exc}")


# -- subcommands ------------------------------------------------------------------


def cmd_space(args) -> int:
    space = _space_from_args(args)
    rep = _base_report(space, args.deterministic)
    counts = {}
    for s in range(1, space.n + 1):
        counts[str(s)] = len(space.subspaces(s))
    rep["subspaces"] = counts
    rep["points"] = counts["1"]
    rep["generators"] = counts[str(space.n)]
    rep["chambers"] = count_flags(range(1, space.n + 1), space.params).value
    if args.dump_subspaces:
        space.dump_subspaces_csv(args.dump_rank, args.dump_subspaces)
        rep["dumped"] = {"rank": args.dump_rank, "path": str(args.dump_subspaces)}
    _emit(rep, args.out)
    return EXIT_OK


def cmd_graph(args) -> int:
    space = _space_from_args(args)
    J = _parse_J(args.J, space.n)
    g = build_graph(space, J, threads=args.threads)
    rep = _base_report(space, args.deterministic)
    rep.update({"J": list(J), "n_vertices": g.n, "degree": g.degree,
                "edges": g.edge_count()})
    if args.format == "dimacs":
        if not args.out:
            raise SystemExit("--format dimacs requires --out")
        g.export_dimacs(args.out, complement=args.complement)
        print(json.dumps(rep, indent=2, sort_keys=True))
        return EXIT_OK
    if args.format == "json-edges":
        rep["edges_list"] = g.to_json_dict()["edges"]
    _emit(rep, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    space = _space_from_args(args)
    J = _parse_J(args.J, space.n)
    g = build_graph(space, J, threads=args.threads)
    rep = _base_report(space, args.deterministic)
    spec = g.spectrum()
    rep.update({
        "J": list(J),
        "n_vertices": g.n,
        "degree": g.degree,
        "spectrum": [[v, m] for v, m in spec.eigenvalues],
        "smallest": spec.smallest,
    })
    if space.params.valid_regime:
        from .counting import min_eigenvalue_flags
        predicted = min_eigenvalue_flags(J, space.params)
        rep["smallest_closed_form"] = predicted
        rep["match"] = bool(predicted == spec.smallest)
    _emit(rep, args.out)
    return EXIT_OK if rep.get("match", True) else EXIT_VERIFICATION_FAILED


def _count_rows(space) -> list:
    """The formula-vs-enumeration table."""
    pr = space.params
    rows = []

    def add(formula, closed, enumerated):
        rows.append({"formula": formula, "params": f"{space.kind}(n={space.n},q={space.q})",
                     "closed_form": int(closed), "enumerated": int(enumerated),
                     "match": int(closed) == int(enumerated)})

    for s in range(1, space.n + 1):
        add(f"subspaces({s})", count_extensions(0, s, pr).value, len(space.subspaces(s)))
    gen = space.generators[0]
    for m in range(1, space.n + 1):
        add(f"gauss({space.n},{m})", gaussian_binomial(space.n, m, space.q).value,
            int(space.containment_matrix(m, space.n)[:, gen.id].sum()))
    for m in range(1, space.n):
        for s in range(m + 1, space.n + 1):
            add(f"extensions({m},{s})", count_extensions(m, s, pr).value,
                int(space.containment_matrix(m, s)[0].sum()))
    for s in range(1, space.n + 1):
        fam = enumerate_flags(space, range(1, s + 1))
        cnt = sum(1 for f in fam.flags if f[s - 1] == 0)
        add(f"full_flags({s})", count_full_flags(s, space.q).value, cnt)
    # position counts relative to a fixed m-space, all valid index triples
    for m in range(1, space.n + 1):
        U = space.subspaces(m)[0]
        perpU = space.perp(U.mat)
        for s in range(1, space.n + 1):
            buckets = {}
            for T in space.subspaces(s):
                j = space.meet(T, U).shape[0]
                jl = space.meet(T, perpU).shape[0]
                buckets[(j, jl - j)] = buckets.get((j, jl - j), 0) + 1
            for (j, l), cnt in sorted(buckets.items()):
                k = s - j - l
                add(f"position(m={m},j={j},k={k},l={l})",
                    count_by_position(m, j, k, l, pr).value, cnt)
    return rows


def cmd_verify_counts(args) -> int:
    space = _space_from_args(args)
    rep = _base_report(space, args.deterministic)
    rows = _count_rows(space)
    ext_ok = all(
        verify_chamber_extension_counts(space, J)
        for J in _all_types(space.n)) if space.n <= 3 and space.q <= 2 else None
    rep["rows"] = rows
    if ext_ok is not None:
        rep["chamber_extension_counts_exhaustive"] = ext_ok
    ok = all(r["match"] for r in rows) and ext_ok is not False
    rep["all_match"] = ok
    _emit(rep, args.out)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


def _all_types(n: int):
    out = []
    for mask in range(1, 1 << n):
        out.append(tuple(i + 1 for i in range(n) if mask >> i & 1))
    return out


def cmd_verify_antidesigns(args) -> int:
    space = _space_from_args(args)
    rep = _base_report(space, args.deterministic)
    n = space.n
    rows = []
    chamber_graph = build_graph(space, range(1, n + 1), threads=args.threads)
    sharp_chambers = blow_up(space, build_example(space, "a"), range(1, n + 1))

    for J, graph in ((tuple(range(1, n + 1)), chamber_graph),):
        ok = verify_all_chi_orthogonal(graph)
        c = chi(graph, 0)
        act, pred, eq = pairing(c, sharp_chambers.members, graph.n)
        rows.append({"constructor": "chi", "base_id": 0, "J": list(J),
                     "orthogonal": ok, "pairing_actual": act,
                     "pairing_predicted": str(pred), "pairing_match": eq})

    _, K = chamber_graph.min_eigenspace()
    for s in range(1, n + 1):
        for S in space.subspaces(s)[: args.sample]:
            v = v_subspace(space, S)
            ok = orthogonal_to_min_eigenspace(chamber_graph, v)
            act, pred, eq = pairing(v, sharp_chambers.members, chamber_graph.n)
            rows.append({"constructor": "v_subspace", "base_id": S.id, "J": [s],
                         "orthogonal": ok, "pairing_actual": act,
                         "pairing_predicted": str(pred), "pairing_match": eq,
                         "scaled_sum": verify_subspace_scaled_sum(space, S)})
    sharp_gens = build_example(space, "b") if space.params.valid_regime else None
    for m in range(1, n):
        for M in space.subspaces(m)[: args.sample]:
            g = build_graph(space, [n])
            v = v_mspace(space, M, n)
            ok = orthogonal_to_min_eigenspace(g, v)
            row = {"constructor": "v_mspace", "base_id": M.id, "J": [n],
                   "orthogonal": ok, "sum_identity": verify_mspace_sum(space, M, n)}
            if sharp_gens:
                act, pred, eq = pairing(v, sharp_gens.members, g.n)
                row.update({"pairing_actual": act, "pairing_predicted": str(pred),
                            "pairing_match": eq})
            rows.append(row)
    ok = all(r["orthogonal"] and r.get("pairing_match", True)
             and r.get("scaled_sum", True) and r.get("sum_identity", True)
             for r in rows)
    rep["rows"] = rows
    rep["all_match"] = ok
    _emit(rep, args.out)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


def cmd_ekr(args) -> int:
    space = _space_from_args(args)
    rep = _base_report(space, args.deterministic)
    try:
        F = build_example(space, args.family, args.base)
    except ValueError as exc:
        raise SystemExit(f"cannot build example: {exc}")
    if args.blow_up_to:
        F = blow_up(space, F, _parse_J(args.blow_up_to, space.n))
    ok, witness = verify_ekr(space, F)
    rep["ekr_set"] = ekr_to_json_dict(space, F)
    rep["is_ekr"] = ok
    if witness:
        rep["violating_pair"] = list(witness)
    if space.params.valid_regime and len(enumerate_flags(space, F.J)) <= 50000:
        sharp = ratio_sharpness(space, F, build_graph(space, F.J, threads=args.threads))
        rep["sharpness"] = {"size": sharp.size, "bound": sharp.bound,
                            "sharp": sharp.sharp, "certificate": sharp.certificate}
    if F.J == tuple(range(1, space.n + 1)):
        xyz_rows = []
        for s in range(1, space.n + 1):
            w = weights(space, F, s)
            xyz_rows.append({"s": s, "heavy": int(w.heavy.sum()),
                             "max_weight": int(w.weights.max()),
                             "full_count": w.full_count})
        rep["weights"] = xyz_rows
    if args.save:
        with open(args.save, "w") as fh:
            json.dump(ekr_to_json_dict(space, F), fh, sort_keys=True)
    _emit(rep, args.out)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


def _seeds_for(space, J, name):
    if not name:
        return []
    n = space.n
    if name == "a":
        F = build_example(space, "a")
    elif name == "b":
        F = build_example(space, "b")
    elif name in ("c", "d"):
        F = build_example(space, name)
    elif name == "star":
        s = J[0] if len(J) == 1 else 1
        F = sspaces_through_point(space, s, 0)
    else:
        raise SystemExit(f"unknown seed example {name!r}")
    if tuple(F.J) != tuple(J):
        F = blow_up(space, F, J)
    return [F.members]


def cmd_search(args) -> int:
    space = _space_from_args(args)
    J = _parse_J(args.J, space.n)
    g = build_graph(space, J, threads=args.threads)
    seeds = _seeds_for(space, J, args.seed_example)
    t0 = time.monotonic()
    result = max_independent_set(
        g, seeds=seeds, node_limit=args.node_limit,
        time_limit=args.budget_seconds)
    rep = _base_report(space, args.deterministic)
    rep.update({
        "J": list(J),
        "n_vertices": g.n,
        "alpha_lower": result.alpha_lower,
        "alpha_upper": result.alpha_upper,
        "status": result.status,
        "squeeze": result.squeeze,
        "nodes": result.nodes,
        "witness": list(result.witness),
    })
    if result.status == "proved":
        rep["alpha"] = result.alpha
    if not args.deterministic:
        rep["seconds"] = round(time.monotonic() - t0, 3)
    if result.status == "proved" and J == tuple(range(1, space.n + 1)):
        F = EKRSet(J, result.witness, "search")
        sr = structure_check(space, F)
        rep["structure"] = {"is_blow_up": sr.is_blow_up,
                            "dimensions": list(sr.dimensions)}
    _emit(rep, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    space = _space_from_args(args)
    rep = _base_report(space, args.deterministic)
    failures = []

    rows = _count_rows(space)
    rep["counting"] = {"rows": len(rows), "all_match": all(r["match"] for r in rows)}
    if not rep["counting"]["all_match"]:
        failures.append("counting")

    spectra = {}
    for s in range(1, space.n + 1):
        g = build_graph(space, [s], threads=args.threads)
        if g.n > MAX_DENSE_SPECTRUM:
            continue
        spec = g.spectrum()
        entry = {"n_vertices": g.n, "degree": g.degree,
                 "spectrum": [[v, m] for v, m in spec.eigenvalues]}
        if space.params.valid_regime:
            entry["matches_closed_form"] = \
                spec.smallest == min_eigenvalue_sspace(s, space.params)
            if not entry["matches_closed_form"]:
                failures.append(f"spectrum[{s}]")
        spectra[str(s)] = entry
    chambers_J = tuple(range(1, space.n + 1))
    gc = build_graph(space, chambers_J, threads=args.threads)
    if gc.n <= MAX_DENSE_SPECTRUM:
        spec = gc.spectrum()
        entry = {"n_vertices": gc.n, "degree": gc.degree,
                 "spectrum": [[v, m] for v, m in spec.eigenvalues]}
        if space.params.valid_regime:
            entry["matches_closed_form"] = \
                spec.smallest == min_eigenvalue_chambers(space.params)
            if not entry["matches_closed_form"]:
                failures.append("spectrum[chambers]")
        spectra["chambers"] = entry
    rep["spectra"] = spectra

    quot = {}
    for J in _all_types(space.n):
        r = quotient_relation_check(space, J, verify_lift=False)
        quot[",".join(map(str, J))] = {"scale": r.scale, "holds": r.holds}
        if not r.holds:
            failures.append(f"quotient[{J}]")
    rep["quotient_relation"] = quot

    ekr_entries = {}
    if space.params.valid_regime:
        a = build_example(space, "a")
        Fa = blow_up(space, a, chambers_J)
        sa = ratio_sharpness(space, Fa, gc)
        ekr_entries["blow_up_a"] = {"size": sa.size, "bound": sa.bound,
                                    "sharp": sa.sharp, "certificate": sa.certificate}
        if not (sa.sharp and sa.certificate):
            failures.append("ekr[a]")
        b = build_example(space, "b")
        Fb = blow_up(space, b, chambers_J)
        sb = ratio_sharpness(space, Fb, gc)
        ekr_entries["blow_up_b"] = {"size": sb.size, "bound": sb.bound,
                                    "sharp": sb.sharp, "certificate": sb.certificate}
        if not (sb.sharp and sb.certificate):
            failures.append("ekr[b]")
        sra = structure_check(space, Fa)
        srb = structure_check(space, Fb)
        ekr_entries["structure_a"] = {"is_blow_up": sra.is_blow_up, "s": sra.s}
        ekr_entries["structure_b"] = {"is_blow_up": srb.is_blow_up, "s": srb.s}

        searches = {}
        for J, seed in (((1,), a.members), ((space.n,), b.members),
                        (chambers_J, Fa.members)):
            g = build_graph(space, J, threads=args.threads)
            res = max_independent_set(g, seeds=[seed],
                                      node_limit=args.node_limit,
                                      time_limit=args.budget_seconds)
            searches[",".join(map(str, J))] = {
                "alpha_lower": res.alpha_lower, "alpha_upper": res.alpha_upper,
                "status": res.status, "squeeze": res.squeeze}
            if res.status != "proved":
                failures.append(f"search[{J}]")
        rep["search"] = searches
    rep["ekr"] = ekr_entries

    rep["failures"] = failures
    rep["ok"] = not failures
    _emit(rep, args.out)
    return EXIT_OK if not failures else EXIT_VERIFICATION_FAILED


# -- argument plumbing ---------------------------------------------------------------


class _SubParser(argparse.ArgumentParser):
    """Subcommand parser with defaults always visible in --help."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("formatter_class", argparse.ArgumentDefaultsHelpFormatter)
        super().__init__(*args, **kwargs)


def _add_space_args(p):
    p.add_argument("--kind", required=True, choices=sorted(KIND_TYPE),
                   help="polar space family")
    p.add_argument("-n", type=int, required=True, help="rank")
    p.add_argument("-q", type=int, required=True, help="field size")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("POLAR_EKR_THREADS", "1")),
                   help="worker threads for graph construction")
    p.add_argument("--deterministic", action="store_true",
                   help="byte-identical reports across runs")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polar-ekr",
        description="Exact flags/opposition/EKR computations in finite "
                    "classical polar spaces")
    sub = ap.add_subparsers(dest="command", required=True,
                            parser_class=_SubParser)

    p = sub.add_parser("space", help="counts summary and CSV export")
    _add_space_args(p)
    p.add_argument("--dump-subspaces", default=None, help="CSV output path")
    p.add_argument("--dump-rank", type=int, default=1, help="rank to dump")
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("graph", help="build and export an opposition graph")
    _add_space_args(p)
    p.add_argument("-J", required=True, help="flag type: comma list or 'all'")
    p.add_argument("--format", choices=["summary", "dimacs", "json-edges"],
                   default="summary")
    p.add_argument("--complement", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("spectrum", help="certified integer spectrum")
    _add_space_args(p)
    p.add_argument("-J", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify-counts", help="formulas against enumeration")
    _add_space_args(p)
    p.set_defaults(func=cmd_verify_counts)

    p = sub.add_parser("verify-antidesigns", help="orthogonality and pairings")
    _add_space_args(p)
    p.add_argument("--sample", type=int, default=10 ** 9,
                   help="restrict base objects per constructor")
    p.set_defaults(func=cmd_verify_antidesigns)

    p = sub.add_parser("ekr", help="construct and verify an example family")
    _add_space_args(p)
    p.add_argument("--family", required=True, choices=["a", "b", "c", "d"])
    p.add_argument("--base", type=int, default=None)
    p.add_argument("--blow-up-to", default=None, help="target type, e.g. 1,2,3")
    p.add_argument("--save", default=None, help="write the EKR set as JSON")
    p.set_defaults(func=cmd_ekr)

    p = sub.add_parser("search", help="exact maximum independent set")
    _add_space_args(p)
    p.add_argument("-J", required=True)
    p.add_argument("--seed-example", default=None,
                   choices=["a", "b", "c", "d", "star"])
    p.add_argument("--budget-seconds", type=float, default=0.0)
    p.add_argument("--node-limit", type=int, default=0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("report", help="full desk-scale verification suite")
    _add_space_args(p)
    p.add_argument("--budget-seconds", type=float, default=0.0)
    p.add_argument("--node-limit", type=int, default=0)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_USAGE
        return exc.code if exc.code is not None else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
