"""Seeded experiment harness: identifiability surveys, recovery-error sweeps
and minimum-path ratio histograms.

Every instance and trial gets its own seed derived from the config seed with
``numpy.random.SeedSequence``, so results do not depend on execution order or
on the number of worker processes.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import binomtest

from .exceptions import SizeGuardError, ValidationError
from .expander import (MAX_EXHAUSTIVE_LEFT, EPSILON_MAX, ExpanderCertificate,
                       certify_1_identifiable, degree_decompose, exhaustive_expander_check,
                       validate_certificate)
from .netgraph import BipartiteGraph
from .pathsel import identifiability_heuristic, verify_selection
from .tomo import decomposed_error_bound, estimate_delays
from .topogen import TopoConfig, make_instance

MU_GRID = tuple(round(0.1 * i, 1) for i in range(11))
BIN_WIDTH = Fraction(1, 20)


@dataclass(frozen=True)
class SimConfig:
    instance_count: int = 50
    node_count: int = 200
    exponent: float = 2.1
    boundary_counts: tuple = (5, 10, 15, 20)
    ks: tuple = (1,)
    mus: tuple = MU_GRID
    congested_delay: float = 10.0
    seed: int = 0
    edges_per_node: int = 2
    jobs: int = 1
    max_left: int = MAX_EXHAUSTIVE_LEFT
    survey_ks: tuple = (1, 2, 3)

    def __post_init__(self):
        for name in ("boundary_counts", "ks", "mus", "survey_ks"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.instance_count < 0:
            raise ValidationError("instance_count must be >= 0")
        if not self.boundary_counts:
            raise ValidationError("boundary_counts is empty")
        if any(int(k) < 1 for k in self.ks) or any(int(k) < 1 for k in self.survey_ks):
            raise ValidationError("k must be >= 1")
        if any(m < 0 for m in self.mus):
            raise ValidationError("mu must be >= 0")
        if self.congested_delay <= 0:
            raise ValidationError("congested_delay must be positive")
        if self.jobs < 1:
            raise ValidationError("jobs must be >= 1")
        for b in self.boundary_counts:
            self.topo(b, 0)  # validates node/boundary/exponent combination

    def topo(self, boundary: int, index: int) -> TopoConfig:
        return TopoConfig(self.node_count, self.exponent, int(boundary),
                          instance_seed(self.seed, boundary, index), self.edges_per_node)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ValidationError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)


def instance_seed(seed: int, *key: int) -> int:
    ss = np.random.SeedSequence([int(seed), *map(int, key)])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def binomial_interval(successes: int, total: int, level: float = 0.95):
    """Clopper-Pearson interval; (nan, nan) for an empty denominator."""
    if total == 0:
        return (float("nan"), float("nan"))
    ci = binomtest(int(successes), int(total)).proportion_ci(level, method="exact")
    return (float(ci.low), float(ci.high))


# ---------------------------------------------------------------------------
# identifiability survey


@dataclass
class SurveyRow:
    boundary_count: int
    k: int
    passed: int
    total: int
    skipped: int

    @property
    def fraction(self) -> float:
        return self.passed / self.total if self.total else float("nan")

    def as_dict(self) -> dict:
        lo, hi = binomial_interval(self.passed, self.total)
        return {"boundary_count": self.boundary_count, "k": self.k, "passed": self.passed,
                "total": self.total, "skipped": self.skipped, "fraction": self.fraction,
                "ci_low": lo, "ci_high": hi}


@dataclass
class SurveyReport:
    rows: list
    certificates: dict = field(default_factory=dict)  # (boundary, index) -> cert dict

    def fraction(self, boundary: int, k: int) -> float:
        for r in self.rows:
            if r.boundary_count == boundary and r.k == k:
                return r.fraction
        raise KeyError((boundary, k))

    def to_dict(self) -> dict:
        return {"rows": [r.as_dict() for r in self.rows],
                "certificates": [{"boundary_count": b, "index": i, "certificate": c}
                                 for (b, i), c in sorted(self.certificates.items())]}

    def to_csv(self) -> str:
        return _csv([r.as_dict() for r in self.rows])


def k_identifiable(routing, k: int, max_left: int = MAX_EXHAUSTIVE_LEFT) -> bool:
    """Exhaustive (2k, d, 1/4) expansion of every degree class.

    Raises ``SizeGuardError`` if some class is too large to enumerate.
    """
    for cls in degree_decompose(routing):
        sub = np.asarray(cls.submatrix)
        bg = BipartiteGraph(tuple(range(sub.shape[1])), tuple(range(sub.shape[0])), sub)
        if not exhaustive_expander_check(bg, 2 * k, EPSILON_MAX, max_left):
            return False
    return True


def _survey_instance(args):
    topo, ks, max_left = args
    inst = make_instance(topo)
    cert = certify_1_identifiable(inst.routing)
    levels = {}
    ok = cert.verdict
    # a level is only attempted when all lower levels passed, which keeps
    # the pass sets nested; a size-guard hit marks this and higher levels skipped
    for k in sorted(ks):
        if ok is None:
            levels[k] = None
            continue
        if k == 1:
            levels[k] = ok
            continue
        if not ok:
            levels[k] = False
            continue
        try:
            ok = k_identifiable(inst.routing, k, max_left)
        except SizeGuardError:
            ok = None
        levels[k] = ok
    return levels, cert.to_dict() if cert.verdict else None


def run_identifiability_survey(config: SimConfig) -> SurveyReport:
    ks = tuple(sorted(set(config.survey_ks) | {1}))
    jobs = [(config.topo(b, i), ks, config.max_left)
            for b in config.boundary_counts for i in range(config.instance_count)]
    results = _map(_survey_instance, jobs, config.jobs)
    rows, certs = [], {}
    pos = 0
    for b in config.boundary_counts:
        chunk = results[pos:pos + config.instance_count]
        pos += config.instance_count
        for i, (_, cert) in enumerate(chunk):
            if cert is not None:
                certs[(int(b), i)] = cert
        for k in ks:
            vals = [lv[k] for lv, _ in chunk]
            skipped = sum(v is None for v in vals)
            rows.append(SurveyRow(int(b), k, sum(v is True for v in vals),
                                  len(vals) - skipped, skipped))
    return SurveyReport(rows, certs)


def recheck_certificates(report: SurveyReport, config: SimConfig) -> bool:
    """Regenerate every counted instance and re-validate its stored certificate."""
    for (b, i), data in report.certificates.items():
        inst = make_instance(config.topo(b, i))
        if not validate_certificate(ExpanderCertificate.from_dict(data), inst.routing):
            return False
    return True


# ---------------------------------------------------------------------------
# recovery error


@dataclass
class ErrorReport:
    errors: dict  # (boundary, k, mu) -> list of normalized errors, by instance index
    bound_violations: int = 0
    uncertified: dict = field(default_factory=dict)  # boundary -> count

    def mean(self, boundary: int, k: int, mu: float) -> float:
        e = self.errors[(boundary, k, mu)]
        return float(np.mean(e)) if e else float("nan")

    def rows(self) -> list:
        out = []
        for (b, k, mu), e in sorted(self.errors.items()):
            out.append({"boundary_count": b, "k": k, "mu": mu, "instances": len(e),
                        "mean_error": float(np.mean(e)) if e else float("nan")})
        return out

    def plot_rows(self) -> list:
        """x = mu, y = mean error over all boundary counts, series = k."""
        pooled = {}
        for (b, k, mu), e in self.errors.items():
            pooled.setdefault((k, mu), []).extend(e)
        return [{"series_k": k, "x_mu": mu, "y_mean_error": float(np.mean(e)) if e else float("nan")}
                for (k, mu), e in sorted(pooled.items())]

    def to_dict(self) -> dict:
        return {"groups": self.rows(), "bound_violations": self.bound_violations,
                "uncertified": {str(b): c for b, c in sorted(self.uncertified.items())}}

    def to_csv(self) -> str:
        return _csv(self.rows())

    def plot_csv(self) -> str:
        return _csv(self.plot_rows())


def normalized_error(x, x_hat) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(x - x_hat) / np.linalg.norm(x))


def draw_delays(n: int, k: int, mu: float, congested_delay: float, seed: int):
    """Delay vector with ``k`` congested links over exponential background.

    The congested set and the unit-mean exponential draws depend only on
    ``seed``, so sweeping ``mu`` reuses the same randomness.
    """
    if not 1 <= k <= n:
        raise ValidationError(f"k must lie in [1, {n}]")
    rng = np.random.default_rng(seed)
    hot = rng.choice(n, size=k, replace=False)
    base = rng.standard_exponential(n)
    x = mu * base
    x[hot] = congested_delay
    return x, np.sort(hot)


def _recovery_instance(args):
    topo, ks, mus, delay, seed, index = args
    inst = make_instance(topo)
    rm = inst.routing
    cert = certify_1_identifiable(rm)
    if not cert.verdict:
        return None
    R = rm.entries.astype(float)
    out, violations = {}, 0
    for k in ks:
        if k > rm.n:
            continue
        tseed = instance_seed(seed, topo.boundary_count, index, k)
        for mu in mus:
            x, _ = draw_delays(rm.n, k, mu, delay, tseed)
            est = estimate_delays(rm, R @ x)
            out[(k, mu)] = normalized_error(x, est.estimate)
            # the weaker multi-class guarantee must always hold
            lhs = float(np.abs(est.estimate - x).sum())
            if lhs > decomposed_error_bound(x, cert.epsilon) + 1e-7 * max(1.0, lhs):
                violations += 1
    return out, violations


def run_recovery_experiment(config: SimConfig) -> ErrorReport:
    jobs = [(config.topo(b, i), config.ks, config.mus, config.congested_delay, config.seed, i)
            for b in config.boundary_counts for i in range(config.instance_count)]
    results = _map(_recovery_instance, jobs, config.jobs)
    errors = {(int(b), int(k), float(mu)): [] for b in config.boundary_counts
              for k in config.ks for mu in config.mus}
    uncert = {int(b): 0 for b in config.boundary_counts}
    violations = 0
    for (topo, *_), res in zip(jobs, results):
        b = topo.boundary_count
        if res is None:
            uncert[b] += 1
            continue
        vals, v = res
        violations += v
        for (k, mu), e in vals.items():
            errors[(b, int(k), float(mu))].append(e)
    return ErrorReport(errors, violations, uncert)


# ---------------------------------------------------------------------------
# minimum-path ratios


@dataclass
class RatioHistogram:
    """Histogram of selected-paths / links over certified networks.

    Pruned small networks can need more paths than they have links; such
    ratios are kept in ``ratios`` and counted in ``overflow`` rather than
    binned. ``excluded`` counts networks whose full routing fails to certify.
    """

    counts: list  # counts[i] covers [i/20, (i+1)/20); ratio 1 falls in the last bin
    ratios: list = field(default_factory=list)
    failures: int = 0
    overflow: int = 0
    excluded: int = 0
    note: str = ""

    @property
    def edges(self) -> list:
        return [float(i * BIN_WIDTH) for i in range(len(self.counts) + 1)]

    @property
    def total(self) -> int:
        return int(sum(self.counts))

    @property
    def mode(self) -> float | None:
        """Lower edge of the fullest bin (lowest on ties), None if empty."""
        if not self.total:
            return None
        return float(int(np.argmax(self.counts)) * BIN_WIDTH)

    def rows(self) -> list:
        e = self.edges
        return [{"bin_low": e[i], "bin_high": e[i + 1], "count": c} for i, c in enumerate(self.counts)]

    def to_dict(self) -> dict:
        return {"bins": self.rows(), "mode": self.mode, "successes": self.total,
                "failures": self.failures, "overflow": self.overflow,
                "excluded": self.excluded, "note": self.note}

    def to_csv(self) -> str:
        return _csv(self.rows())


def ratio_bin(r: int, n: int) -> int:
    q = Fraction(int(r), int(n))
    if not 0 <= q <= 1:
        raise ValidationError("ratio must lie in [0, 1]")
    return min(int(q / BIN_WIDTH), int(1 / BIN_WIDTH) - 1)


def ratio_histogram(pairs, failures: int = 0, excluded: int = 0) -> RatioHistogram:
    counts = [0] * int(1 / BIN_WIDTH)
    ratios = []
    overflow = 0
    for r, n in pairs:
        if r > n:
            overflow += 1
        else:
            counts[ratio_bin(r, n)] += 1
        ratios.append(r / n)
    note = "" if ratios else "no successful instances"
    if overflow:
        note = f"{overflow} ratio(s) above 1 counted in overflow"
    return RatioHistogram(counts, ratios, failures, overflow, excluded, note)


def _minpath_instance(topo):
    inst = make_instance(topo)
    if not certify_1_identifiable(inst.routing).verdict:
        return "excluded"
    sel = identifiability_heuristic(inst.routing)
    if not sel.feasible:
        return None
    if not verify_selection(inst.routing, sel).verdict:
        raise ArithmeticError("heuristic selection failed verification")
    return sel.objective, inst.routing.n


def run_minpath_survey(config: SimConfig) -> RatioHistogram:
    """Heuristic path counts over the instances whose full routing certifies."""
    topos = [config.topo(b, i) for b in config.boundary_counts for i in range(config.instance_count)]
    results = _map(_minpath_instance, topos, config.jobs)
    excluded = sum(1 for r in results if r == "excluded")
    ok = [r for r in results if isinstance(r, tuple)]
    failures = sum(1 for r in results if r is None)
    return ratio_histogram(ok, failures=failures, excluded=excluded)


# ---------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _csv(rows: list) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n"
