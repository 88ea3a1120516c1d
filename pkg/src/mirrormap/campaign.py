"""Verification campaigns: a config file listing targets, run as a batch.

Each target is ``{command, params}``. Jobs are executed on a thread pool
and their reports are collected in sorted key order, so the output does
not depend on completion order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import yaml

from . import dwork, landau, mirror, ode
from .cache import SeriesCache, default_cache_dir
from .mirror import BOLD, MirrorFamily, parse_nvec
from .report import FAIL, PASS, Report, timed

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2
FORMATS = ("JSON", "JSONL", "CSV")


class ConfigError(ValueError):
    pass


@dataclass
class CampaignConfig:
    targets: list = field(default_factory=list)
    order: int = 100
    sweep_bounds: dict = field(default_factory=lambda: dict(dwork.DEFAULT_BOUNDS))
    cache_dir: Optional[str] = None
    output: str = "JSON"
    output_dir: str = "reports"
    workers: int = 1

    def __post_init__(self):
        if self.order < 2:
            raise ConfigError("order must be at least 2")
        bounds = dict(dwork.DEFAULT_BOUNDS)
        bounds.update(self.sweep_bounds or {})
        for k, v in bounds.items():
            if not isinstance(v, int) or v <= 0:
                raise ConfigError(f"sweep bound {k} must be a positive integer")
        self.sweep_bounds = bounds
        self.output = self.output.upper()
        if self.output not in FORMATS:
            raise ConfigError(f"output must be one of {FORMATS}")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        for t in self.targets:
            if not isinstance(t, dict) or "command" not in t:
                raise ConfigError(f"malformed target {t!r}")

    @classmethod
    def from_mapping(cls, data: Optional[dict]) -> "CampaignConfig":
        data = dict(data or {})
        unknown = set(data) - {"targets", "order", "sweep_bounds", "cache_dir",
                               "output", "output_dir", "workers"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        data["targets"] = data.get("targets") or []
        return cls(**data)

    @classmethod
    def load(cls, path) -> "CampaignConfig":
        # YAML is a superset of JSON, so either format is accepted
        with open(path) as fh:
            return cls.from_mapping(yaml.safe_load(fh))


# --- individual commands -------------------------------------------------

def _nv(params):
    return parse_nvec(params["nvec"])


def _order(params, cfg):
    return int(params.get("M", params.get("order", cfg.order)))


def _cmd_thm4(p, cfg, cache):
    return mirror.verify_theorem4(_nv(p), int(p["L"]), _order(p, cfg),
                                  bool(p.get("outside_hypotheses", False)), cache=cache)


def _cmd_thm2(p, cfg, cache):
    return mirror.verify_theorem2(_nv(p), int(p["L"]), _order(p, cfg), p.get("root"),
                                  bool(p.get("outside_hypotheses", False)), cache=cache)


def _cmd_thm2_sharpness(p, cfg, cache):
    return mirror.theorem2_sharpness(_nv(p), _order(p, cfg), cache=cache)


def _cmd_qL_root(p, cfg, cache):
    """Integrality of exp(G_L/(W F)) for an explicit root W."""
    nvec, L, M = _nv(p), int(p["L"]), _order(p, cfg)
    flavor = p.get("flavor", BOLD)
    W = int(p.get("root", 1))
    MirrorFamily(nvec, flavor, L, M, bool(p.get("outside_hypotheses", False)))
    rep = Report("qL_root", {"nvec": list(nvec), "L": L, "flavor": flavor, "root": W}, M)
    with timed(rep):
        mirror._check_integral(rep, mirror.exp_series(
            mirror.log_qL_series(nvec, flavor, L, M, cache) / W))
    return rep


def _cmd_coro1(p, cfg, cache):
    return mirror.verify_corollary1(int(p["N"]), int(p["k"]), _order(p, cfg), cache=cache)


def _cmd_six_family(p, cfg, cache):
    return mirror.verify_six_family(_order(p, cfg), bool(p.get("with_exponents", True)),
                                    cache=cache)


def _cmd_refinement_B1(p, cfg, cache):
    return mirror.verify_refinement_B1(_nv(p), _order(p, cfg), p.get("root"), cache=cache)


def _cmd_conjecture(p, cfg, cache):
    return mirror.verify_conjecture(_nv(p), _order(p, cfg), p.get("flavor", BOLD), cache=cache)


def _cmd_mirror_inverse(p, cfg, cache):
    fam = MirrorFamily(_nv(p), p.get("flavor", BOLD), None, _order(p, cfg))
    return mirror.mirror_inverse_check(fam, tau=p.get("tau"))


def _bounds(p, cfg):
    b = dict(cfg.sweep_bounds)
    b.update({k: int(v) for k, v in p.items() if k in dwork.DEFAULT_BOUNDS})
    return b


def _cmd_lemma(p, cfg, cache):
    return dwork.run_lemma(str(p["lemma"]), _nv(p), **_bounds(p, cfg))


def _cmd_condition3(p, cfg, cache):
    b = _bounds(p, cfg)
    nvec = _nv(p)
    primes = [int(p["p"])] if "p" in p else dwork.primes_up_to(b["p_max"])
    rep = Report("condition3", {"nvec": list(nvec), "primes": primes,
                                "flavor": p.get("flavor", BOLD)})
    with timed(rep):
        for q in primes:
            sub = dwork.dwork_condition_iii(nvec, q, b["s_max"], b["n_max"],
                                            p.get("flavor", BOLD))
            rep.details[f"p={q}"] = sub.summary()
            if not sub.passed:
                rep.fail(sub.first_bad_index, sub.witness, failing_prime=q)
    return rep


def _cmd_identity107a(p, cfg, cache):
    b = _bounds(p, cfg)
    return dwork.identity107a_sweep(_nv(p), b["p_max"], b["K_max"], p.get("flavor", BOLD))


def _cmd_eq_J(p, cfg, cache):
    return dwork.harmonic_J_sweep(int(p.get("p_max", 13)), int(p.get("J_max", 400)))


def _cmd_landau(p, cfg, cache):
    N = int(p["N"])
    rep = Report("landau_profile", {"N": N})
    with timed(rep):
        try:
            prof = landau.delta_profile(N)
            rep.details["jumps"] = len(prof.jump_positions)
        except landau.LandauViolation as exc:
            rep.fail(None, exc.x, violation=exc.prop)
    return rep


def _cmd_ode(p, cfg, cache):
    return ode.apply_and_verify(_nv(p), _order(p, cfg))


COMMANDS: dict[str, Callable] = {
    "thm4": _cmd_thm4,
    "thm2": _cmd_thm2,
    "thm2_sharpness": _cmd_thm2_sharpness,
    "qL_root": _cmd_qL_root,
    "coro1": _cmd_coro1,
    "six_family": _cmd_six_family,
    "refinement_B1": _cmd_refinement_B1,
    "conjecture": _cmd_conjecture,
    "mirror_inverse": _cmd_mirror_inverse,
    "lemma": _cmd_lemma,
    "condition3": _cmd_condition3,
    "identity107a": _cmd_identity107a,
    "eq_J": _cmd_eq_J,
    "landau_profile": _cmd_landau,
    "ode": _cmd_ode,
}

_EXPANDS_L = {"thm4", "thm2", "qL_root"}


# --- expansion and execution ---------------------------------------------

def _canonical(value):
    return json.dumps(value, sort_keys=True, separators=(",", ":"), default=str)


def target_key(command: str, params: dict) -> str:
    return f"{command}:{_canonical(params)}"


def expand_targets(targets) -> list[tuple[str, dict]]:
    """Split L lists, ranges ("1..6") and "all" into one job per L value."""
    jobs = []
    for t in targets:
        command = t["command"]
        params = dict(t.get("params") or {})
        if command in _EXPANDS_L and "L" in params:
            Ls = params["L"]
            if Ls == "all":
                Ls = list(range(1, max(parse_nvec(params["nvec"])) + 1))
            elif isinstance(Ls, str) and ".." in Ls:
                lo, hi = Ls.split("..")
                Ls = list(range(int(lo), int(hi) + 1))
            elif not isinstance(Ls, list):
                Ls = [Ls]
            for L in Ls:
                jobs.append((command, {**params, "L": int(L)}))
        else:
            jobs.append((command, params))
    return sorted(jobs, key=lambda j: target_key(*j))


def _slug(key: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", key).strip("_")[:120]


@dataclass
class CampaignResult:
    exit_code: int
    reports: list  # list of (key, Report)
    files: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "targets": len(self.reports),
            "passed": sum(r.passed for _, r in self.reports),
            "failed": sum(not r.passed for _, r in self.reports),
            "exit_code": self.exit_code,
        }


def _run_job(command, params, cfg, cache) -> Report:
    try:
        return COMMANDS[command](params, cfg, cache)
    except (ValueError, KeyError, TypeError) as exc:
        # a target that cannot be evaluated is a finding, not a crash
        rep = Report(command, params)
        return rep.fail(None, None, error=f"{type(exc).__name__}: {exc}")


def render(reports, fmt: str, timing: bool = True) -> str:
    dicts = [r.to_dict(timing) for _, r in reports]
    if fmt == "JSON":
        return json.dumps(dicts, sort_keys=True, indent=2) + "\n"
    if fmt == "JSONL":
        return "".join(json.dumps(d, sort_keys=True) + "\n" for d in dicts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "claim", "status", "order", "first_bad_index", "witness"])
    for (key, _), d in zip(reports, dicts):
        w.writerow([key, d["claim"], d["status"], d.get("order") or "",
                    d.get("first_bad_index", ""), d.get("witness", "")])
    return buf.getvalue()


def run_campaign(cfg: CampaignConfig, write: bool = True, timing: bool = True) -> CampaignResult:
    unknown = sorted({t["command"] for t in cfg.targets} - set(COMMANDS))
    if unknown:
        log.error("unknown command(s): %s", ", ".join(unknown))
        return CampaignResult(EXIT_USAGE, [], errors=[f"unknown command {c}" for c in unknown])
    jobs = expand_targets(cfg.targets)
    cache = SeriesCache(default_cache_dir(cfg.cache_dir))
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(_run_job, c, p, cfg, cache) for c, p in jobs]
        reports = [(target_key(c, p), f.result()) for (c, p), f in zip(jobs, futures)]
    code = EXIT_OK if all(r.passed for _, r in reports) else EXIT_FINDING
    result = CampaignResult(code, reports)
    if write:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        ext = {"JSON": "json", "JSONL": "jsonl", "CSV": "csv"}[cfg.output]
        for i, (key, rep) in enumerate(reports):
            path = out / f"{i:04d}-{_slug(key)}.{ext}"
            path.write_text(render([(key, rep)], cfg.output, timing))
            result.files.append(path)
        summary = out / "summary.json"
        summary.write_text(json.dumps(
            {**{k: str(v) for k, v in result.summary().items()},
             "targets_run": [k for k, _ in reports],
             "statuses": [r.status for _, r in reports]}, indent=2, sort_keys=True) + "\n")
        result.files.append(summary)
    return result


__all__ = ["CampaignConfig", "CampaignResult", "COMMANDS", "ConfigError", "EXIT_OK",
           "EXIT_FINDING", "EXIT_USAGE", "PASS", "FAIL", "expand_targets", "render",
           "run_campaign", "target_key"]
