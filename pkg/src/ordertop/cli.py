"""Command-line front end: every module as a subcommand with file I/O,
canonical-JSON reports, and DOT export.

Exit codes: 0 for completed computations (including *false* verdicts —
negative mathematical answers are results), 1 for failed certificates,
failed verification properties, and aborted computations (size bounds,
non-lattice inputs, witness mismatches), 2 for usage and parse errors.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import completion as _completion
from . import convergence as _convergence
from . import gallery as _gallery
from . import measure as _measure
from . import poset as _poset
from . import topology as _topology
from .errors import (
    NoEscapeWithinDepth,
    NotALatticeError,
    NotConvergentInMeasure,
    OrdertopError,
    ParameterOutOfRange,
    PosetFormatError,
    SizeBoundExceeded,
    TruncationNotLattice,
    UnboundedFiber,
    WindowTooSmall,
    WitnessMismatch,
)

_USAGE_ERRORS = (PosetFormatError, ParameterOutOfRange)
_ABORT_ERRORS = (
    SizeBoundExceeded,
    TruncationNotLattice,
    WindowTooSmall,
    NotALatticeError,
    WitnessMismatch,
    UnboundedFiber,
    NoEscapeWithinDepth,
    NotConvergentInMeasure,
)


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_poset(path: str) -> _poset.FinitePoset:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PosetFormatError(f"cannot read {path}: {exc}") from None
    return _poset.parse_poset(text)


def _load_lasso(spec: str, p: _poset.FinitePoset) -> _convergence.LassoSequence:
    """A lasso given inline ("prefix: … ; cycle: …") or as @file."""
    text = spec
    if spec.startswith("@"):
        try:
            text = Path(spec[1:]).read_text()
        except OSError as exc:
            raise PosetFormatError(f"cannot read {spec[1:]}: {exc}") from None
    return _convergence.parse_lasso(text, p)


def _cmd_complete(args) -> int:
    p = _load_poset(args.poset)
    comp = _completion.dm_complete(p, limit=args.limit)
    payload = {
        "base_elements": list(p.labels),
        "cut_count": len(comp.cuts),
        "cuts": [sorted(p.labels_of(m)) for m in comp.cuts],
        "embedding": {
            p.labels[i]: sorted(p.labels_of(comp.cuts[j]))
            for i, j in enumerate(comp.embedding)
        },
        "is_self_complete": len(comp.cuts) == p.n,
    }
    _emit(payload, args.output)
    return 0


def _cmd_verify_dm(args) -> int:
    p = _load_poset(args.poset)
    comp = _completion.dm_complete(p, limit=args.limit)
    report = _completion.verify_completion_properties(
        comp, exhaustive_bound=args.exhaustive_bound, seed=args.seed
    )
    all_pass = all(r["status"] == "pass" for r in report)
    _emit({"properties": report, "all_pass": all_pass}, args.output)
    return 0 if all_pass else 1


def _cmd_converge(args) -> int:
    p = _load_poset(args.poset)
    s = _load_lasso(args.seq, p)
    mode = args.mode
    if mode == "o1":
        verdict = _convergence.o1_converges(s, args.target)
    elif mode == "o2":
        verdict = _convergence.o2_converges(s, args.target, exhaustive=args.exhaustive)
    elif mode == "o3":
        verdict = _convergence.o3_converges(s, args.target)
    else:
        verdict = _convergence.odm_converges(s, args.target)
    _emit(verdict.to_json(), args.output)
    return 0


def _cmd_topology(args) -> int:
    p = _load_poset(args.poset)
    report = _topology.topology_inclusion_report(p, bound=args.bound)
    _emit(report, args.output)
    return 0


def _cmd_extract(args) -> int:
    p = _load_poset(args.poset)
    f = _load_lasso(args.f, p)
    g = _load_lasso(args.g, p)
    out = _topology.extract_convergent_subsequence(f, g, args.target)
    _emit(
        {
            "subsequence": _convergence.format_lasso(out),
            "target": args.target,
            "o3_verdict": _convergence.o3_converges(out, args.target).converges,
        },
        args.output,
    )
    return 0


def _write_gallery_files(out_dir: str, stem: str, p: _poset.FinitePoset) -> None:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    (d / f"{stem}.poset").write_text(_poset.format_poset(p))
    (d / f"{stem}.dot").write_text(_poset.to_dot(p, name=stem))


def _cmd_gallery(args) -> int:
    certs: list[_gallery.Certificate] = []
    if args.family == "wolk":
        trunc = _gallery.wolk_truncate(args.n)
        if args.out_dir:
            _write_gallery_files(args.out_dir, f"wolk_{args.n}", trunc.poset)
        if args.check:
            certs.append(_gallery.wolk_no_directed_sup_one(args.n, args.exhaustive_bound))
            if args.n >= 2:
                certs.append(_gallery.wolk_o3_to_top(args.n))
        payload = {
            "family": "wolk",
            "n": args.n,
            "elements": list(trunc.poset.labels),
            "boundary": sorted(trunc.boundary),
            "certificates": [c.to_json() for c in certs],
        }
    else:
        trunc = _gallery.olejcek_truncate(args.k, args.n)
        if args.out_dir:
            _write_gallery_files(
                args.out_dir, f"olejcek_lhat_{args.k}_{args.n}", trunc.poset_l_hat
            )
            _write_gallery_files(
                args.out_dir, f"olejcek_l_{args.k}_{args.n}", trunc.poset_l
            )
        if args.check:
            certs.append(_gallery.olejcek_b_set_o1_closed(args.k, args.n))
            if args.k - args.window_start >= 2:
                certs.append(
                    _gallery.olejcek_zero_sequence_converges(
                        args.k, args.n, window_start=args.window_start
                    )
                )
        payload = {
            "family": "olejcek",
            "k": args.k,
            "n": args.n,
            "lattice_elements": trunc.poset_l_hat.n,
            "boundary": sorted(trunc.boundary),
            "certificates": [c.to_json() for c in certs],
        }
    _emit(payload, args.output)
    return 0 if all(c.status == "pass" for c in certs) else 1


def _read_family(path: str) -> list[_measure.StepFunction]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise PosetFormatError(f"cannot read {path}: {exc}") from None
    fns = []
    for idx, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            fns.append(_measure.parse_step_function(line))
        except PosetFormatError as exc:
            raise PosetFormatError(f"{path}:{idx}: {exc}") from None
    if not fns:
        raise PosetFormatError(f"{path} contains no step functions")
    return fns


def _cmd_measure(args) -> int:
    if args.experiment == "t5":
        gens = _read_family(args.generators)
        sym = _measure.t5_symmetric_difference_certificate(args.depth)
        m, n, f, gamma = _measure.t5_escape_witness(gens, max_depth=args.depth * 8)
        payload = {
            "symmetric_difference": sym.to_json(),
            "escape": {
                "m": m,
                "n": n,
                "element": _measure.format_step_function(f),
                "gamma": str(gamma),
            },
        }
        _emit(payload, args.output)
        return 0 if sym.status == "pass" else 1
    if args.experiment == "separation":
        cert = _measure.sigma_pq_separation(
            args.p, args.q, Fraction(args.alpha), args.depth, Fraction(args.epsilon)
        )
        tau = _measure.tau_mu_sigma1_separation(max(2, min(args.depth, 64)))
        _emit({"sigma_pq": cert.to_json(), "tau_mu_sigma1": tau.to_json()}, args.output)
        return 0 if cert.status == "pass" and tau.status == "pass" else 1
    family = _read_family(args.family)
    cutoffs = [Fraction(c) for c in args.cutoffs]
    table = _measure.uniform_integrability_profile(family, cutoffs)
    _emit(
        {"profile": [{"cutoff": str(c), "sup_tail": str(v)} for c, v in table]},
        args.output,
    )
    return 0


def _cmd_export_dot(args) -> int:
    p = _load_poset(args.poset)
    text = _poset.to_dot(p, name=args.name)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_random_poset(args) -> int:
    p = _poset.random_poset(args.n, density=args.density, seed=args.seed)
    text = _poset.format_poset(p)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ordertop",
        description="Order-convergence toolkit: completions, deciders, "
        "counterexample certificates, measure-space seminorms.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def out_flag(sp):
        sp.add_argument("-o", "--output", default=None, help="write JSON here")

    sp = sub.add_parser("complete", help="Dedekind–MacNeille completion of a poset file")
    sp.add_argument("poset")
    sp.add_argument("--limit", type=int, default=_completion.DEFAULT_CUT_LIMIT)
    out_flag(sp)
    sp.set_defaults(fn=_cmd_complete)

    sp = sub.add_parser("verify-dm", help="check the seven completion properties")
    sp.add_argument("poset")
    sp.add_argument("--limit", type=int, default=_completion.DEFAULT_CUT_LIMIT)
    sp.add_argument("--exhaustive-bound", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    out_flag(sp)
    sp.set_defaults(fn=_cmd_verify_dm)

    sp = sub.add_parser("converge", help="decide one convergence mode for a lasso")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--seq", required=True, help="'prefix: … ; cycle: …' or @file")
    sp.add_argument("--mode", choices=["o1", "o2", "o3", "odm"], required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--exhaustive", action="store_true",
                    help="o2 only: scan all subsets instead of the bound cones")
    out_flag(sp)
    sp.set_defaults(fn=_cmd_converge)

    sp = sub.add_parser("topology", help="exhaustive order-topology inclusion report")
    sp.add_argument("poset")
    sp.add_argument("--bound", type=int, default=7)
    out_flag(sp)
    sp.set_defaults(fn=_cmd_topology)

    sp = sub.add_parser("extract", help="convergent-subsequence extraction")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--f", required=True, help="the sequence to thin")
    sp.add_argument("--g", required=True, help="the convergent witness")
    sp.add_argument("--target", required=True)
    out_flag(sp)
    sp.set_defaults(fn=_cmd_extract)

    sp = sub.add_parser("gallery", help="counterexample truncations + certificates")
    fam = sp.add_subparsers(dest="family", required=True)
    wp = fam.add_parser("wolk")
    wp.add_argument("--n", type=int, required=True)
    wp.add_argument("--check", action="store_true")
    wp.add_argument("--exhaustive-bound", type=int, default=8)
    wp.add_argument("--out-dir", default=None, help="write .poset and .dot files here")
    out_flag(wp)
    wp.set_defaults(fn=_cmd_gallery)
    op = fam.add_parser("olejcek")
    op.add_argument("--k", type=int, required=True)
    op.add_argument("--n", type=int, required=True)
    op.add_argument("--check", action="store_true")
    op.add_argument("--window-start", type=int, default=2)
    op.add_argument("--out-dir", default=None)
    out_flag(op)
    op.set_defaults(fn=_cmd_gallery)

    sp = sub.add_parser("measure", help="exact dyadic measure-space experiments")
    ex = sp.add_subparsers(dest="experiment", required=True)
    tp = ex.add_parser("t5")
    tp.add_argument("--generators", required=True, help="file of step functions")
    tp.add_argument("--depth", type=int, default=12)
    out_flag(tp)
    tp.set_defaults(fn=_cmd_measure)
    pp = ex.add_parser("separation")
    pp.add_argument("--p", type=int, default=1)
    pp.add_argument("--q", type=int, default=2)
    pp.add_argument("--alpha", default="3/2")
    pp.add_argument("--depth", type=int, default=200)
    pp.add_argument("--epsilon", default="1/10")
    out_flag(pp)
    pp.set_defaults(fn=_cmd_measure)
    up = ex.add_parser("ui-profile")
    up.add_argument("family", help="file of step functions")
    up.add_argument("--cutoffs", nargs="+", default=["1", "2", "4"])
    out_flag(up)
    up.set_defaults(fn=_cmd_measure)

    sp = sub.add_parser("export-dot", help="Hasse diagram as Graphviz DOT")
    sp.add_argument("poset")
    sp.add_argument("--name", default="poset")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=_cmd_export_dot)

    sp = sub.add_parser("random-poset", help="seeded random poset in file format")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=_cmd_random_poset)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except _USAGE_ERRORS as exc:
        _emit({"outcome": "usage-error", "error": type(exc).__name__, "message": str(exc)}, None)
        return 2
    except _ABORT_ERRORS as exc:
        _emit({"outcome": "aborted", "error": type(exc).__name__, "message": str(exc)}, None)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        _emit({"outcome": "usage-error", "error": type(exc).__name__, "message": str(exc)}, None)
        return 2


if __name__ == "__main__":
    sys.exit(main())
