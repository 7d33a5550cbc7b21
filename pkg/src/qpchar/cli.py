"""Command-line front end: character computation, identity verification
suites, and n-way method comparison with machine-readable output.

Exit codes: 0 success / all checks verified, 1 verification failure,
2 usage or validation error.  Standard output carries only the artifact
(JSON, CSV, or text table); progress notes go to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import envelope, fermionic, fock, quasiparticle
from .quasiparticle import AdmissibilityContext
from .series import TruncatedSeries

USAGE_ERROR = 2
VERIFY_ERROR = 1


class UsageError(Exception):
    pass


def _progress(msg):
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# weight parsing and method dispatch
# ---------------------------------------------------------------------------


def parse_weights(spec, n):
    """Accept 'k0,k1,...,kn' or the two-term shorthand 'a*L0+b*Lj'."""
    spec = spec.strip()
    if "*" in spec or "L" in spec:
        parts = [0] * (n + 1)
        for piece in spec.split("+"):
            piece = piece.strip()
            if "*" in piece:
                mult, label = piece.split("*", 1)
                mult = int(mult)
            else:
                mult, label = 1, piece
            label = label.strip()
            if not label.startswith("L"):
                raise UsageError(f"bad weight term {piece!r}")
            idx = int(label[1:])
            if not (0 <= idx <= n):
                raise UsageError(f"weight index {idx} out of range 0..{n}")
            parts[idx] += mult
        return tuple(parts)
    try:
        parts = tuple(int(x) for x in spec.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse weights {spec!r}") from exc
    if len(parts) != n + 1:
        raise UsageError(f"need {n + 1} weight entries k0..k{n}, got {len(parts)}")
    if any(p < 0 for p in parts):
        raise UsageError("weight multiplicities must be nonnegative")
    return parts


def _weight_family(parts):
    """Classify: ('two-term', k0, j) or ('first-pair', k1, k2)
    or ('last-pair', k_{n-1}, k_n) or None."""
    n = len(parts) - 1
    nonzero = [i for i in range(1, n + 1) if parts[i]]
    if len(nonzero) <= 1:
        j = nonzero[0] if nonzero else None
        return ("two-term", parts[0], j)
    if parts[0] == 0 and nonzero == [1, 2] and n >= 2:
        return ("first-pair", parts[1], parts[2])
    if parts[0] == 0 and nonzero == [n - 1, n] and n >= 2:
        return ("last-pair", parts[n - 1], parts[n])
    return None


def compute_char(method, parts, cutoff, workers=1):
    """Dispatch a character computation; UsageError when the weight lies
    outside the method's supported family."""
    n = len(parts) - 1
    k = sum(parts)
    family = _weight_family(parts)
    if family is None:
        raise UsageError(
            "no supported family: need k0 L0 + kj Lj, k1 L1 + k2 L2, "
            "or k_{n-1} L_{n-1} + k_n L_n"
        )
    kind = family[0]
    if method == "fermionic":
        if kind == "two-term":
            return _fermionic_parallel(n, k, family[1], family[2], cutoff, workers)
        if kind == "first-pair":
            return fermionic.char_first_pair(n, k, family[1], cutoff)
        return fermionic.char_last_pair(n, k, family[2], cutoff)
    if method == "pform":
        if kind == "first-pair":
            return fermionic.char_first_pair_pform(n, k, family[1], cutoff)
        if kind == "last-pair":
            return fermionic.char_last_pair_pform(n, k, family[2], cutoff)
        raise UsageError("pform supports only the pair families")
    if method == "basis":
        if kind != "two-term":
            raise UsageError("basis supports only weights k0 L0 + kj Lj")
        return _basis_parallel(n, k, family[1], family[2], cutoff, workers)
    if method == "oracle":
        if kind == "two-term" and k == 1:
            sector = family[2] if family[1] == 0 else 0
            return fock.principal_subspace_dims(n, sector or 0, cutoff)
        raise UsageError("oracle supports only level-1 fundamental weights")
    raise UsageError(f"unknown method {method!r}")


# -- chunked sector evaluation (results independent of worker count) --------


def _fermionic_chunk(args):
    n, k, k0, j, cutoff, count, index = args
    sectors = _fermionic_sectors(n, k, k0, j, cutoff)
    return fermionic._assemble(n, k, cutoff, sectors[index::count]).to_json_dict()


def _fermionic_sectors(n, k, k0, j, cutoff):
    def linear_for(i):
        if j is not None and i == j - 1:
            return lambda row: sum(row[k0:])
        return lambda row: 0

    return fermionic.iter_sectors(
        n, k, cutoff, [linear_for(i) for i in range(n)], [0] * n
    )


def _fermionic_parallel(n, k, k0, j, cutoff, workers):
    if k0 == k:
        j = None
    if workers <= 1:
        return fermionic.fermionic_char(n, k, k0, j, cutoff)
    count = workers
    jobs = [(n, k, k0, j, cutoff, count, idx) for idx in range(count)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_fermionic_chunk, jobs))
    out = TruncatedSeries.zero(n, cutoff)
    for part in parts:
        out = out + TruncatedSeries.from_json_dict(part)
    return out


def _basis_chunk(args):
    n, k, k0, j, cutoff, count, index = args
    ctx = AdmissibilityContext(n, k, k0, j)
    sectors = _fermionic_sectors(n, k, k0, j, cutoff)
    terms = {}
    for rows, expo in sectors[index::count]:
        charges = tuple(quasiparticle._rows_to_charges(row, k) for row in rows)
        bounds = quasiparticle.energy_bounds(ctx, charges)
        base = -sum(b for col in bounds for b in col)
        if base > cutoff:
            continue
        key_r = tuple(sum(col) for col in charges)
        for w, c in quasiparticle._count_energy_tuples(charges, bounds, cutoff).items():
            key = (key_r, w)
            terms[key] = terms.get(key, 0) + c
    return TruncatedSeries(n, cutoff, 0, terms).to_json_dict()


def _basis_parallel(n, k, k0, j, cutoff, workers):
    if k0 == k:
        j = None
    if workers <= 1:
        return quasiparticle.char_from_basis(
            AdmissibilityContext(n, k, k0, j), cutoff
        )
    jobs = [(n, k, k0, j, cutoff, workers, idx) for idx in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_basis_chunk, jobs))
    out = TruncatedSeries.zero(n, cutoff)
    for part in parts:
        out = out + TruncatedSeries.from_json_dict(part)
    return out


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------


def render_series(series, fmt):
    if fmt == "json":
        return series.to_json() + "\n"
    if fmt == "csv":
        n = series.n
        header = ",".join(f"r{i}" for i in range(1, n + 1)) + ",s,coeff"
        lines = [header]
        for r, s in series.support():
            coeff = series.terms[(r, s)]
            lines.append(",".join(str(x) for x in r) + f",{s},{coeff}")
        return "\n".join(lines) + "\n"
    if fmt == "text":
        lines = [f"# n={series.n} cutoff={series.cutoff}"]
        for r, s in series.support():
            lines.append(f"x^{list(r)} q^{s}: {series.terms[(r, s)]}")
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def render_report(suite, checks, fmt):
    ok = all(c["ok"] for c in checks)
    if fmt == "json":
        return json.dumps({"suite": suite, "ok": ok, "checks": checks}) + "\n"
    lines = []
    for c in checks:
        status = "PASS" if c["ok"] else "FAIL"
        params = " ".join(f"{k}={v}" for k, v in c.items() if k not in ("ok", "witness"))
        line = f"{status} {suite} {params}"
        if not c["ok"] and c.get("witness") is not None:
            line += f" witness={c['witness']}"
        lines.append(line)
    lines.append(f"{'PASS' if ok else 'FAIL'} {suite}: {len(checks)} checks")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_char(args):
    parts = parse_weights(args.weights, args.n)
    if args.k is not None and sum(parts) != args.k:
        raise UsageError(f"--k {args.k} disagrees with weights of level {sum(parts)}")
    _progress(f"char n={args.n} weights={parts} cutoff={args.cutoff} method={args.method}")
    series = compute_char(args.method, parts, args.cutoff, args.workers)
    _emit(render_series(series, args.format), args.out)
    return 0


def cmd_verify(args):
    checks = run_suite(
        args.suite,
        n=args.n,
        k=args.k,
        cutoff=args.cutoff,
        window=args.window,
        perturb=args.perturb,
    )
    text = render_report(args.suite, checks, args.format)
    _emit(text, args.out)
    return 0 if all(c["ok"] for c in checks) else VERIFY_ERROR


def run_suite(suite, n=None, k=None, cutoff=None, window=None, perturb=False):
    """One verification suite as a list of check dicts (ok / witness / params)."""
    checks = []
    if suite == "recursion":
        if n is None or k is None:
            raise UsageError("recursion needs --n and --k")
        cutoff = 10 if cutoff is None else cutoff
        for which in ("first", "second"):
            for edge in range(1, k + 1):
                ok, rep = fermionic.verify_recursion(
                    which, n, k, edge, cutoff,
                    rhs_k_edge=edge + 1 if perturb else None,
                )
                checks.append({"identity": which, "n": n, "k": k,
                               "k_edge": edge, "order": cutoff, "ok": ok,
                               "witness": _fmt_witness(rep.get("witness"))})
    elif suite == "pform":
        if n is None or k is None:
            raise UsageError("pform needs --n and --k")
        cutoff = 10 if cutoff is None else cutoff
        for case, rfn, pfn in (
            ("first", fermionic.char_first_pair, fermionic.char_first_pair_pform),
            ("last", fermionic.char_last_pair, fermionic.char_last_pair_pform),
        ):
            for edge in range(1, k + 1):
                ok, witness = rfn(n, k, edge, cutoff).equal_upto(
                    pfn(n, k, edge, cutoff), cutoff
                )
                checks.append({"case": case, "n": n, "k": k, "k_edge": edge,
                               "order": cutoff, "ok": ok,
                               "witness": _fmt_witness(witness)})
    elif suite == "level1-seq":
        if n is None:
            raise UsageError("level1-seq needs --n")
        cutoff = 10 if cutoff is None else cutoff
        for i in range(1, n + 1):
            ok, rep = fermionic.verify_level1_sequence(
                n, i, cutoff, q_shift=2 if perturb else 1
            )
            checks.append({"n": n, "i": i, "order": cutoff, "ok": ok,
                           "witness": _fmt_witness(rep.get("witness"))})
    elif suite == "appendix":
        window = 1 if window is None else window
        for nn in (2, 3):
            for kk in (1, 2):
                checks.extend(_appendix_checks(nn, kk, window))
    elif suite == "oracle":
        if n is None:
            raise UsageError("oracle needs --n")
        cutoff = 6 if cutoff is None else cutoff
        for i in range(0, n + 1):
            _progress(f"oracle sector {i} of 0..{n}")
            s_oracle = fock.principal_subspace_dims(n, i, cutoff)
            k0, j = (1, None) if i == 0 else (0, i)
            s_ferm = fermionic.fermionic_char(n, 1, k0, j, cutoff)
            s_basis = quasiparticle.char_from_basis(
                AdmissibilityContext(n, 1, k0, j), cutoff
            )
            ok1, w1 = s_oracle.equal_upto(s_ferm, cutoff)
            ok2, w2 = s_basis.equal_upto(s_ferm, cutoff)
            checks.append({"n": n, "i": i, "order": cutoff, "ok": ok1 and ok2,
                           "witness": _fmt_witness(w1 or w2)})
    elif suite == "ag":
        if k is None:
            raise UsageError("ag needs --k")
        cutoff = 30 if cutoff is None else cutoff
        sum_side = fermionic.collapse_charges(
            fermionic.fermionic_char(1, k, k, None, cutoff)
        )
        ok, witness = sum_side.equal_upto(
            fermionic.andrews_gordon_product(k, cutoff), cutoff
        )
        checks.append({"k": k, "order": cutoff, "ok": ok,
                       "witness": _fmt_witness(witness)})
    elif suite == "dynkin":
        if n is None or k is None:
            raise UsageError("dynkin needs --n and --k")
        cutoff = 8 if cutoff is None else cutoff
        for k0 in range(0, k + 1):
            js = [None] if k0 == k else list(range(1, n + 1))
            for j in js:
                ok, rep = fermionic.dynkin_flip_check(n, k, k0, j or 1, cutoff)
                checks.append({"n": n, "k": k, "k0": k0, "j": j, "order": cutoff,
                               "ok": ok, "witness": _fmt_witness(rep.get("witness"))})
    else:
        raise UsageError(f"unknown suite {suite!r}")
    return checks


def _appendix_checks(n, k, window):
    checks = []
    for color in range(1, n + 1):
        for t in range(k + 1, k + 4):
            # representative assembly is independent of the splitting depth
            direct = envelope.representative_R(color, t, k, window, n)
            via = envelope.representative_R(color, t, k, window, n, assemble_via=0)
            checks.append({"check": "rep-M-independence", "n": n, "k": k,
                           "color": color, "t": t, "window": window,
                           "ok": direct.body == via.body, "witness": None})
            for m in (1, 2, 3):
                for alpha in _lemma_roots(n):
                    ok, rep = envelope.lemma_commutator_check(
                        color, t, alpha, m, window, n, k
                    )
                    checks.append({"check": "lemma", "n": n, "k": k,
                                   "color": color, "t": t, "alpha": alpha,
                                   "m": m, "window": window, "ok": ok,
                                   "witness": rep.get("residual")})
            for a_word in (((-1, (min(2, n), min(2, n))),),
                           ((-1, (1, 1)), (-2, (1, n)))):
                a = {tuple(a_word): 1}
                ok, rep = envelope.corollary_ideal_check(color, t, a, window, n, k)
                checks.append({"check": "corollary", "n": n, "k": k,
                               "color": color, "t": t, "a": str(a_word),
                               "window": window, "ok": ok, "witness": None})
    return checks


def _lemma_roots(n):
    roots = [(i, i) for i in range(1, n + 1)]
    roots += [(i, i + 1) for i in range(1, n)]
    return roots


def _fmt_witness(witness):
    if witness is None:
        return None
    return str(witness)


def cmd_compare(args):
    parts = parse_weights(args.weights, args.n)
    methods = [m.strip() for m in args.methods.split(",")]
    if len(methods) < 2:
        raise UsageError("compare needs at least two methods")
    series = {}
    for m in methods:
        _progress(f"compare: computing {m}")
        series[m] = compute_char(m, parts, args.cutoff, args.workers)
    checks = []
    for a_idx in range(len(methods)):
        for b_idx in range(a_idx + 1, len(methods)):
            a, b = methods[a_idx], methods[b_idx]
            order = min(series[a].cutoff, series[b].cutoff)
            ok, witness = series[a].equal_upto(series[b], order)
            checks.append({"methods": f"{a} vs {b}", "order": order,
                           "ok": ok, "witness": _fmt_witness(witness)})
    text = render_report("compare", checks, args.format)
    _emit(text, args.out)
    return 0 if all(c["ok"] for c in checks) else VERIFY_ERROR


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qpchar",
        description="Exact principal-subspace characters: compute and verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p_char = sub.add_parser("char", help="compute one character")
    p_char.add_argument("--n", type=int, required=True)
    p_char.add_argument("--k", type=int, default=None)
    p_char.add_argument("--weights", required=True,
                        help="k0,...,kn or 'a*L0+b*Lj'")
    p_char.add_argument("--cutoff", type=int, required=True)
    p_char.add_argument("--method", default="fermionic",
                        choices=("fermionic", "basis", "oracle", "pform"))
    common(p_char)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=("recursion", "pform", "level1-seq",
                                            "appendix", "oracle", "ag", "dynkin"))
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--k", type=int, default=None)
    p_verify.add_argument("--cutoff", type=int, default=None)
    p_verify.add_argument("--window", type=int, default=None)
    p_verify.add_argument("--perturb", action="store_true",
                          help="fault injection: checks must then fail")
    common(p_verify)

    p_cmp = sub.add_parser("compare", help="cross-check methods on one weight")
    p_cmp.add_argument("--n", type=int, required=True)
    p_cmp.add_argument("--k", type=int, default=None)
    p_cmp.add_argument("--weights", required=True)
    p_cmp.add_argument("--cutoff", type=int, required=True)
    p_cmp.add_argument("--methods", required=True,
                       help="comma list from fermionic,basis,oracle,pform")
    common(p_cmp)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return USAGE_ERROR if exc.code not in (0,) else 0
    try:
        if args.command == "char":
            return cmd_char(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "compare":
            return cmd_compare(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
