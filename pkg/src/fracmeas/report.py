"""Run configuration and the machine-readable verification report."""
from __future__ import annotations

import json
import os
import random
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

from .clusters import (cluster, cluster_units, enumerate_gaps, expected_gap_counts,
                       gap_type_counts, gap_units, verify_identity_h1)
from .exact import (DEFAULT_PRECISION_CAP, Density, UndecidedAtMaxPrecision,
                    decimal_digits_to_bits, format_bracket, pow_s_bracket, s_bracket)
from .hausdorff import (FalsificationError, absorption_chain, exhaustive_union_oracle,
                        hausdorff_report, level_density, max_density_consecutive)
from .ifs import ConsecutiveUnion, Params, Word
from .measure import cdf
from .packing import boundary_density_scan, packing_scan

SCHEMA = "fracmeas.report/1"
ENV_PREFIX = "FRACMEAS_"
#: levels past this n**k are skipped by the audits
AUDIT_MAX_BASIC = 4096
REPORT_DIGITS = 50


@dataclass
class RunConfig:
    n: int = 2
    l: int = 3
    max_level: int = 8
    precision_cap: int = DEFAULT_PRECISION_CAP
    center_level: int = 6
    radius_grid: int = 512
    output_format: str = "text"
    seed: int = 0

    def __post_init__(self):
        Params(self.n, self.l)
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")
        if self.precision_cap < 1:
            raise ValueError("precision cap must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @property
    def params(self) -> Params:
        return Params(self.n, self.l)

    @classmethod
    def env_defaults(cls, environ=None) -> dict:
        """Defaults overridden by FRACMEAS_<FIELD> variables."""
        environ = os.environ if environ is None else environ
        out = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            out[f.name] = raw if f.name == "output_format" else int(raw)
        return out


# ---------------------------------------------------------------------------
# serialisation helpers

def rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def bracket_json(lo: Fraction, hi: Fraction, digits: int = REPORT_DIGITS) -> dict:
    return {"kind": "bracket", "decimal_bracket": list(format_bracket(lo, hi, digits)),
            "bits": decimal_digits_to_bits(digits)}


def density_json(d: Density, digits: int = REPORT_DIGITS) -> dict:
    lo, hi = d.bracket(decimal_digits_to_bits(digits))
    return {"kind": "density", "p": d.p, "L": d.L,
            "decimal_bracket": list(format_bracket(lo, hi, digits)),
            "bits": decimal_digits_to_bits(digits)}


def theorem_targets(params: Params, digits: int = REPORT_DIGITS) -> dict:
    bits = decimal_digits_to_bits(digits)
    r = params.r
    return {
        "s": bracket_json(*s_bracket(params, bits), digits),
        "r": {"kind": "rational", "value": rational(r)},
        "hausdorff_measure": bracket_json(*pow_s_bracket(r, params, bits), digits),
        "packing_measure": bracket_json(*pow_s_bracket(2, params, bits), digits),
    }


@dataclass
class VerificationReport:
    schema: str
    params: dict
    config: dict
    targets: dict
    hausdorff: list = field(default_factory=list)
    gap_audit: dict = field(default_factory=dict)
    oracle: dict = field(default_factory=dict)
    absorption: dict = field(default_factory=dict)
    measure: dict = field(default_factory=dict)
    boundary: dict = field(default_factory=dict)
    packing: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    precision_exhausted: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> VerificationReport:
        return cls(**data)

    @property
    def passed(self) -> bool:
        return not self.precision_exhausted and all(self.checks.values())

    @property
    def exit_code(self) -> int:
        if self.precision_exhausted:
            return 2
        return 0 if self.passed else 1


def emit_json(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def parse_json(text: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(text))


def emit_text(report: VerificationReport) -> str:
    lines = [f"C(n={report.params['n']}, l={report.params['l']})  [{report.schema}]"]
    for name, key in (("s", "s"), ("H^s = r^s", "hausdorff_measure"),
                      ("P^s = 2^s", "packing_measure")):
        lo, hi = report.targets[key]["decimal_bracket"]
        lines.append(f"  {name:10s} in [{lo}, {hi}]")
    lines.append(f"  {'r':10s} = {report.targets['r']['value']}")
    if report.hausdorff:
        lines.append("  k  |O_k|  d(O_k)=p/L^s  ~d(O_k)")
        for row in report.hausdorff:
            lines.append(f"  {row['k']:<2d} {row['diameter']}  ({row['density']['p']}, "
                         f"{row['density']['L']})  {row['density']['decimal_bracket'][0][:12]}")
    for name, ok in report.checks.items():
        lines.append(f"  [{'PASS' if ok else 'FAIL'}] {name}")
    for name, msg in report.failures.items():
        lines.append(f"  ! {name}: {msg}")
    if report.precision_exhausted:
        lines.append("  ! precision cap exhausted")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the individual audits

def audit_levels(params: Params, max_level: int, limit: int = AUDIT_MAX_BASIC) -> list[int]:
    return [k for k in range(1, max_level + 1) if params.n ** k <= limit]


def gap_cluster_audit(params: Params, levels: list[int]) -> dict:
    """Enumerated gaps and cluster hulls against the closed-form lengths."""
    summary = {"levels": levels, "gaps": 0, "clusters": 0, "ok": True}
    for k in levels:
        gaps = enumerate_gaps(params, k)
        summary["gaps"] += len(gaps)
        if gap_type_counts(gaps) != expected_gap_counts(params, k):
            summary["ok"] = False
        if any(g.length * params.l ** k != gap_units(params, g.type_i) for g in gaps):
            summary["ok"] = False
        for i in range(0, k + 1):
            for v in range(params.n ** (k - i)):
                U = cluster(params, i, k, Word.from_index(params, v, k - i))
                summary["clusters"] += 1
                if U.length_units != cluster_units(params, i):
                    summary["ok"] = False
        if not all(verify_identity_h1(params, i) for i in range(1, k + 1)):
            summary["ok"] = False
    return summary


def cdf_audit(params: Params, levels: list[int], samples: int, rng: random.Random) -> dict:
    self_similar = True
    for _ in range(samples):
        den = rng.randint(1, 10 ** 6)
        x = Fraction(rng.randint(0, den), den)
        Fx = cdf(params, x)
        for i in params.alphabet:
            if cdf(params, (x + i) / params.l) != (i + Fx) / params.n:
                self_similar = False
    plateaus = all(cdf(params, g.left) == cdf(params, g.right)
                   for k in levels for g in enumerate_gaps(params, k))
    normal = cdf(params, params.r) == 1 and cdf(params, 1) == 1
    return {"samples": samples, "self_similarity": self_similar,
            "gap_plateaus": plateaus, "normalized": normal}


def random_consecutive(params: Params, k: int, rng: random.Random) -> ConsecutiveUnion:
    N = params.n ** k
    a = rng.randrange(N)
    b = rng.randrange(N)
    return ConsecutiveUnion(params, k, min(a, b), max(a, b))


def absorption_audit(params: Params, k: int, samples: int, rng: random.Random,
                     cap: int) -> dict:
    steps = 0
    for _ in range(samples):
        chain = absorption_chain(params, random_consecutive(params, k, rng), cap)
        steps += len(chain.steps)
    return {"level": k, "samples": samples, "steps": steps}


def run_verification(config: RunConfig, cdf_samples: int = 200,
                     absorption_samples: int = 50,
                     boundary_samples: int = 100) -> VerificationReport:
    params = config.params
    cap = config.precision_cap
    rng = random.Random(config.seed)
    report = VerificationReport(
        schema=SCHEMA, params={"n": params.n, "l": params.l},
        config=asdict(config), targets=theorem_targets(params))
    levels = audit_levels(params, config.max_level)

    def attempt(name, fn):
        try:
            report.checks[name] = bool(fn())
        except FalsificationError as exc:
            report.checks[name] = False
            report.failures[name] = str(exc)

    def gaps():
        report.gap_audit = gap_cluster_audit(params, [k for k in levels if k <= 8])
        return report.gap_audit["ok"]

    def measure():
        report.measure = cdf_audit(params, [k for k in levels if k <= 8], cdf_samples, rng)
        return all(report.measure[key] for key in ("self_similarity", "gap_plateaus", "normalized"))

    def hausdorff():
        hr = hausdorff_report(params, config.max_level, cap=cap)
        ok = hr.strictly_increasing
        for row in hr.rows:
            entry = {"k": row.k, "diameter": rational(row.diameter),
                     "density": density_json(row.density, 20)}
            if row.k in levels:
                res = max_density_consecutive(params, row.k, cap)
                entry["equals_Ok"] = res.equals_Ok
                entry["argmax_count"] = len(res.argmax)
                ok = ok and res.equals_Ok
            report.hausdorff.append(entry)
        return ok

    def oracle():
        tiny = [k for k in range(1, config.max_level + 1) if params.n ** k <= 16]
        report.oracle = {"levels": tiny}
        for k in tiny:
            best = exhaustive_union_oracle(params, k, cap)
            if best.pair != level_density(params, k).pair:
                return False
            if best.pair != max_density_consecutive(params, k, cap).max_density.pair:
                return False
        return True

    def absorption():
        k = max(k for k in levels if k <= 6)
        report.absorption = absorption_audit(params, k, absorption_samples, rng, cap)
        return True

    def boundary():
        scan = boundary_density_scan(params, boundary_samples, config.seed, cap)
        eq = {(rational(c.left), rational(c.right)) for c in scan.equalities}
        expected = {(rational(0), rational(Fraction(1, params.l))),
                    (rational((params.n - 2 + params.r) / params.l), rational(params.r))}
        report.boundary = {"checks": len(scan.checks),
                           "equalities": sorted([list(e) for e in eq])}
        return scan.passed and expected <= eq

    def packing():
        res = packing_scan(params, config.center_level, config.radius_grid,
                           config.seed, cap)
        t_lo, t_hi = res.target
        lo, hi = res.min_density_bracket
        report.packing = {
            "centers": res.centers, "scanned": res.scanned, "flagged": res.flagged,
            "exact_checked": res.exact_checked, "ties": len(res.ties),
            "argmin": {"center": rational(res.argmin.center),
                       "radius": rational(res.argmin.radius)},
            "argmin_normalized": {"center": rational(res.argmin_normalized.center),
                                  "radius": rational(res.argmin_normalized.radius)},
            "min_density": bracket_json(lo, hi, 15),
            "candidate_density": (None if res.candidate_density is None
                                  else density_json(res.candidate_density, 20)),
        }
        return res.candidate_attains_target and lo <= t_hi and t_lo <= hi

    try:
        attempt("gap_cluster_audit", gaps)
        attempt("measure_engine", measure)
        attempt("hausdorff_search", hausdorff)
        attempt("exhaustive_oracle", oracle)
        attempt("absorption_chains", absorption)
        attempt("boundary_scan", boundary)
        attempt("packing_scan", packing)
    except UndecidedAtMaxPrecision as exc:
        report.precision_exhausted = True
        report.failures["precision"] = str(exc)
    return report
