"""Command-line entry point: ``mirrormap <group> <action> ...``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
errors. All numbers are printed as decimal strings.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction

from . import __version__, arith, campaign, dwork, landau, mirror, ode
from .mirror import BOLD, PLAIN, MirrorFamily, parse_nvec
from .report import to_jsonable
from .series import root_exponent

EXIT_OK, EXIT_FINDING, EXIT_USAGE = campaign.EXIT_OK, campaign.EXIT_FINDING, campaign.EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _nvec_arg(text):
    try:
        return parse_nvec(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _emit_json(obj):
    print(json.dumps(to_jsonable(obj), sort_keys=True))


def _exit_for(passed: bool) -> int:
    return EXIT_OK if passed else EXIT_FINDING


# --- mirror ----------------------------------------------------------------

SERIES_KINDS = ("F", "G", "GL", "q", "qL", "mirror")


def _series(args):
    fam = MirrorFamily(args.nvec, args.flavor, args.L, args.order)
    kind = args.series
    if kind in ("GL", "qL") and args.L is None:
        raise ValueError(f"--L is required for series {kind}")
    return {
        "F": mirror.series_F, "G": mirror.series_G, "GL": mirror.series_GL,
        "q": mirror.q_canonical, "qL": mirror.q_L, "mirror": mirror.mirror_map,
    }[kind](fam)


def cmd_mirror_coeffs(args):
    s = _series(args)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["index", "numerator", "denominator"])
    for i, c in enumerate(s.coeffs):
        c = Fraction(c)
        w.writerow([i, c.numerator, c.denominator])
    return EXIT_OK


def cmd_mirror_verify(args):
    params = {"M": args.order, "flavor": args.flavor}
    for name in ("nvec", "L", "root", "N", "k", "tau"):
        value = getattr(args, name)
        if value is not None:
            params[name] = list(value) if name == "nvec" else value
    if args.outside_hypotheses:
        params["outside_hypotheses"] = True
    cfg = campaign.CampaignConfig(order=args.order)
    cache = campaign.SeriesCache(campaign.default_cache_dir(args.cache_dir)) if args.cache else None
    rep = campaign.COMMANDS[args.claim](params, cfg, cache)
    print(rep.to_json(timing=not args.no_timing))
    return _exit_for(rep.passed)


def cmd_mirror_root_exponent(args):
    s = _series(args) if args.series != "mirror" else None
    if s is None:
        raise ValueError("root-exponent applies to q or qL series")
    if s[0] == 0:
        raise ValueError("series must be a unit (use q or qL, which are stored as z^-1 q)")
    V = root_exponent(s)
    _emit_json({"nvec": list(args.nvec), "flavor": args.flavor, "L": args.L,
                "series": args.series, "order": args.order, "root_exponent": V})
    return EXIT_OK


# --- dwork -----------------------------------------------------------------

def _print_sweep(rep, timing=True):
    if isinstance(rep, dwork.SweepReport):
        for line in rep.jsonl():
            print(line)
    print(rep.to_json(timing=timing))


def cmd_dwork_sweep(args):
    bounds = {"p_max": args.pmax, "j_max": args.jmax, "m_max": args.mmax,
              "K_max": args.kmax, "s_max": args.smax, "n_max": args.nmax}
    if args.lemma == "eqJ":
        rep = dwork.harmonic_J_sweep(args.pmax or 13, args.jmax or 400)
    elif args.nvec is None:
        raise ValueError(f"--nvec is required for lemma {args.lemma}")
    else:
        rep = dwork.run_lemma(args.lemma, args.nvec, **bounds)
    _print_sweep(rep, not args.no_timing)
    return _exit_for(rep.passed)


def cmd_dwork_condition3(args):
    rep = dwork.dwork_condition_iii(args.nvec, args.p, args.smax, args.nmax, args.flavor)
    _print_sweep(rep, not args.no_timing)
    return _exit_for(rep.passed)


def cmd_dwork_identity107a(args):
    rep = dwork.identity107a_sweep(args.nvec, args.pmax, args.kmax, args.flavor)
    print(rep.to_json(timing=not args.no_timing))
    return _exit_for(rep.passed)


# --- landau / ode / arith ----------------------------------------------------

def cmd_landau_profile(args):
    try:
        prof = landau.delta_profile(args.N)
    except landau.LandauViolation as exc:
        print(f"violation of property {exc.prop} at x = {exc.x}", file=sys.stderr)
        return EXIT_FINDING
    sys.stdout.write(prof.to_csv())
    return EXIT_OK


def cmd_ode_verify(args):
    rep = ode.apply_and_verify(args.nvec, args.order)
    d = rep.details
    out = {"nvec": list(args.nvec), "order": args.order, "status": rep.status,
           "operator_degree": d["operator_degree"], "C": d["C"],
           "max_checked_index": d["max_checked_index"], "residual_zero": d["residual_zero"],
           "recurrence_ok": d["recurrence_ok"]}
    if rep.first_bad_index is not None:
        out["first_bad_index"] = rep.first_bad_index
        out["witness"] = rep.witness
        out["residual"] = d.get("residual")
    _emit_json(out)
    return _exit_for(rep.passed)


def cmd_arith_table(args):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["N", "m", "B_bold", "H_bold", "B_plain"])
    for N in range(args.nmin, args.nmax + 1):
        for m in range(args.mmax + 1):
            H = arith.H_bold(N, m)
            w.writerow([N, m, arith.B_bold(N, m), to_jsonable(H), arith.B_plain(N, m)])
    return EXIT_OK


def cmd_run(args):
    try:
        cfg = campaign.CampaignConfig.load(args.config)
    except (OSError, ValueError, TypeError) as exc:
        print(f"cannot load config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output_dir:
        cfg.output_dir = args.output_dir
    if args.workers:
        cfg.workers = args.workers
    result = campaign.run_campaign(cfg, timing=not args.no_timing)
    for err in result.errors:
        print(err, file=sys.stderr)
    for key, rep in result.reports:
        line = f"{rep.status} {key}"
        if not rep.passed:
            line += f" first_bad_index={to_jsonable(rep.first_bad_index)} witness={to_jsonable(rep.witness)}"
        print(line)
    _emit_json(result.summary())
    return result.exit_code


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mirrormap", description="Exact integrality checks for mirror maps.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    groups = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def common(p, order=True, nvec=True, flavor=True):
        if nvec:
            p.add_argument("--nvec", type=_nvec_arg, required=True, help="e.g. 5 or 2,3")
        if flavor:
            p.add_argument("--flavor", choices=(BOLD, PLAIN), default=BOLD)
        if order:
            p.add_argument("--order", "-M", type=int, default=100)
        p.add_argument("--no-timing", action="store_true", help="omit elapsed_ms fields")

    g = groups.add_parser("mirror").add_subparsers(dest="action", required=True,
                                                   parser_class=_Parser)
    p = g.add_parser("coeffs", help="series coefficients as CSV")
    common(p)
    p.add_argument("--series", choices=SERIES_KINDS, default="q")
    p.add_argument("--L", type=int)
    p.set_defaults(func=cmd_mirror_coeffs)

    p = g.add_parser("verify", help="integrality claim report as JSON")
    p.add_argument("claim", choices=("thm4", "thm2", "coro1", "six_family", "refinement_B1",
                                     "conjecture", "mirror_inverse", "qL_root"))
    common(p, nvec=False)
    p.add_argument("--nvec", type=_nvec_arg)
    p.add_argument("--L", type=int)
    p.add_argument("--root", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--outside-hypotheses", action="store_true")
    p.add_argument("--cache", action="store_true", help="use the on-disk series cache")
    p.add_argument("--cache-dir")
    p.set_defaults(func=cmd_mirror_verify)

    p = g.add_parser("root-exponent", help="largest V with an integral V-th root")
    common(p)
    p.add_argument("--series", choices=("q", "qL"), default="q")
    p.add_argument("--L", type=int)
    p.set_defaults(func=cmd_mirror_root_exponent)

    g = groups.add_parser("dwork").add_subparsers(dest="action", required=True,
                                                  parser_class=_Parser)
    p = g.add_parser("sweep", help="valuation-margin sweep (JSONL)")
    p.add_argument("--lemma", required=True, choices=sorted(dwork.LEMMAS) + ["eqJ"])
    common(p, order=False, flavor=False, nvec=False)
    p.add_argument("--nvec", type=_nvec_arg)
    for flag in ("pmax", "jmax", "mmax", "kmax", "smax", "nmax"):
        p.add_argument(f"--{flag}", type=int)
    p.set_defaults(func=cmd_dwork_sweep)

    p = g.add_parser("condition3", help="Dwork formal congruence conditions")
    common(p, order=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--smax", type=int, default=dwork.DEFAULT_BOUNDS["s_max"])
    p.add_argument("--nmax", type=int, default=dwork.DEFAULT_BOUNDS["n_max"])
    p.set_defaults(func=cmd_dwork_condition3)

    p = g.add_parser("identity107a", help="exact combinatorial identity sweep")
    common(p, order=False)
    p.add_argument("--pmax", type=int, default=dwork.DEFAULT_BOUNDS["p_max"])
    p.add_argument("--kmax", type=int, default=dwork.DEFAULT_BOUNDS["K_max"])
    p.set_defaults(func=cmd_dwork_identity107a)

    g = groups.add_parser("landau").add_subparsers(dest="action", required=True,
                                                   parser_class=_Parser)
    p = g.add_parser("profile", help="plateaus of the step function as CSV")
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_landau_profile)

    g = groups.add_parser("ode").add_subparsers(dest="action", required=True,
                                                parser_class=_Parser)
    p = g.add_parser("verify", help="check the differential operator annihilates F, G + log z F")
    common(p, flavor=False)
    p.set_defaults(func=cmd_ode_verify, order=50)

    g = groups.add_parser("arith").add_subparsers(dest="action", required=True,
                                                  parser_class=_Parser)
    p = g.add_parser("table", help="B_bold, H_bold and the plain coefficient as CSV")
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--mmax", type=int, default=10)
    p.set_defaults(func=cmd_arith_table)

    p = groups.add_parser("run", help="run a campaign config (YAML or JSON)")
    p.add_argument("config")
    p.add_argument("--output-dir")
    p.add_argument("--workers", type=int)
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_run)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
