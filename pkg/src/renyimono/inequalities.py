"""Monogamy and polygamy bounds on powers of Rényi-α entanglement.

All bound families share the form ``Σ_j c_j E_j^μ`` over the (labelled)
pairwise values ``E_j``:

===============  ==========================  ==================
family           c_j                         regime
===============  ==========================  ==================
``hamming``      coefficient(k, μ)^ω_H(j)    μ ≥ 1 / 0 ≤ μ ≤ 1
``exponent``     coefficient(k, μ)^j         μ ≥ 1 / 0 ≤ μ ≤ 1
``kim_hamming``  μ^ω_H(j)                    μ ≥ 1 / 0 ≤ μ ≤ 1
``kim_exponent`` μ^j                         μ ≥ 1 / 0 ≤ μ ≤ 1
``baseline``     1, with μ fixed to 1        any
``negative_mu``  1/(N-1), μ < 0              μ < 0
===============  ==========================  ==================

with ``coefficient(k, μ) = ((1+k)^μ - 1) / k^μ``. Zero-valued partners
contribute nothing, whatever their coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .entropy import check_alpha
from .measures import PartitionSpec, RoofResult, renyi_assistance, renyi_entanglement
from .qcore import QuantumState
from .roof import RoofOptions

FAMILIES = ("hamming", "exponent", "kim_hamming", "kim_exponent", "baseline", "negative_mu")
MONOGAMY_FAMILIES = ("baseline", "kim_hamming", "kim_exponent", "hamming", "exponent", "negative_mu")
POLYGAMY_FAMILIES = ("baseline", "kim_hamming", "kim_exponent", "hamming", "exponent")

SCALAR_TOL = 1e-12
VERDICT_TOL = 1e-9
K_TOL = 1e-12

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class BoundParams:
    alpha: float
    mu: float
    k: float | None = None
    family: str = "hamming"

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.family not in FAMILIES:
            raise ValueError(f"unknown bound family {self.family!r}")
        if self.k is not None and not 0 < self.k <= 1:
            raise ValueError(f"k must lie in (0, 1], got {self.k}")
        if self.family == "negative_mu" and not self.mu < 0:
            raise ValueError("the negative_mu family needs mu < 0")


def hamming_weight(j: int) -> int:
    if j < 0:
        raise ValueError("Hamming weight is defined for nonnegative integers")
    return bin(j).count("1")


def coefficient(k: float, mu: float) -> float:
    """``((1+k)^μ - 1) / k^μ`` for ``0 < k ≤ 1``."""
    if not 0 < k <= 1:
        raise ValueError(f"k must lie in (0, 1], got {k}")
    return math.expm1(mu * math.log1p(k)) / k**mu


@dataclass(frozen=True)
class LemmaCheck:
    lhs: float
    rhs: float
    holds: bool


def scalar_lemma(x: float, k: float, mu: float) -> LemmaCheck:
    """Compare ``(1+x)^μ`` with ``1 + coefficient(k, μ) x^μ`` for ``0 ≤ x ≤ k``.

    The left side dominates for μ ≥ 1 and is dominated for 0 ≤ μ ≤ 1.
    """
    if not 0 <= x <= k:
        raise ValueError(f"need 0 <= x <= k, got x={x}, k={k}")
    if mu < 0:
        raise ValueError("the scalar lemma covers mu >= 0 only")
    lhs = (1.0 + x) ** mu
    rhs = 1.0 + coefficient(k, mu) * x**mu
    if mu >= 1:
        holds = lhs >= rhs - SCALAR_TOL
    else:
        holds = lhs <= rhs + SCALAR_TOL
    return LemmaCheck(lhs, rhs, bool(holds))


def _power(v: float, mu: float) -> float:
    return 0.0 if v == 0 else float(v) ** mu


def _coefficients(n: int, family: str, mu: float, k: float | None) -> np.ndarray:
    j = np.arange(n)
    if family == "baseline":
        return np.ones(n)
    if family in ("hamming", "exponent"):
        if k is None:
            raise ValueError(f"family {family!r} needs a value of k")
        base = coefficient(k, mu)
    else:
        base = float(mu)
    if family in ("hamming", "kim_hamming"):
        expo = np.array([hamming_weight(int(i)) for i in j])
    else:
        expo = j
    return np.array([base**int(e) for e in expo], dtype=float)


def _weighted(values: Sequence[float], family: str, mu: float, k: float | None) -> float:
    vals = np.asarray(values, dtype=float)
    if np.any(vals < 0):
        raise ValueError("entanglement values must be nonnegative")
    if family == "baseline":
        return float(vals.sum())
    c = _coefficients(len(vals), family, mu, k)
    return float(sum(ci * _power(v, mu) for ci, v in zip(c, vals)))


def bound_monogamy(values: Sequence[float], params: BoundParams) -> float:
    """Right-hand side of a monogamy inequality for labelled values ``E_0 ... E_{N-1}``.

    ``baseline`` ignores ``params.mu`` and returns the plain sum.
    """
    fam = params.family
    if fam == "negative_mu":
        return bound_negative_mu(values, params.mu)
    if fam != "baseline" and params.mu < 1:
        raise ValueError(f"monogamy family {fam!r} needs mu >= 1, got {params.mu}")
    return _weighted(values, fam, params.mu, params.k)


def bound_polygamy(values: Sequence[float], params: BoundParams) -> float:
    """Right-hand side of a polygamy inequality, ``0 ≤ μ ≤ 1``."""
    fam = params.family
    if fam == "negative_mu":
        raise ValueError("negative_mu is a monogamy-type bound")
    if fam != "baseline" and not 0 <= params.mu <= 1:
        raise ValueError(f"polygamy needs 0 <= mu <= 1, got {params.mu}")
    return _weighted(values, fam, params.mu, params.k)


def bound_negative_mu(values: Sequence[float], mu: float) -> float:
    """Upper bound ``Σ_j E_j^μ / (N-1)`` on ``E^μ`` for μ < 0."""
    vals = np.asarray(values, dtype=float)
    if mu >= 0:
        raise ValueError(f"negative_mu needs mu < 0, got {mu}")
    if len(vals) < 2:
        raise ValueError("negative_mu needs at least two partners")
    if np.any(vals <= 0):
        raise ValueError("negative_mu needs every pairwise value to be nonzero")
    return float(np.sum(vals**mu) / (len(vals) - 1))


@dataclass
class OrderingDiagnostics:
    """Smallest k meeting each ordering condition; ``None`` means infeasible."""

    geometric_min_k: float | None
    sum_min_k: float | None
    sorted_order: list[int]
    sorted_values: list[float]

    def to_json(self) -> dict:
        return {
            "geometric_min_k": _jsonable(self.geometric_min_k, "infeasible"),
            "sum_min_k": _jsonable(self.sum_min_k, "infeasible"),
            "sorted_order": list(self.sorted_order),
            "sorted_values": [float(v) for v in self.sorted_values],
        }


def _ratio(num: float, den: float) -> float:
    if num == 0:
        return 0.0
    if den == 0:
        return math.inf
    return num / den


def ordering_diagnostics(values: Sequence[float]) -> OrderingDiagnostics:
    """Sort values descending (stable) and find the minimal feasible k.

    geometric: max_j E_{j+1}/E_j; sum: max_i (Σ_{j>i} E_j)/E_i.
    """
    vals = np.asarray(values, dtype=float)
    order = [int(i) for i in np.argsort(-vals, kind="stable")]
    v = vals[order]
    geo = max((_ratio(v[j + 1], v[j]) for j in range(len(v) - 1)), default=0.0)
    tails = np.cumsum(v[::-1])[::-1]
    summ = max((_ratio(tails[i + 1], v[i]) for i in range(len(v) - 1)), default=0.0)
    return OrderingDiagnostics(
        geo if geo <= 1 else None,
        summ if summ <= 1 else None,
        order,
        [float(x) for x in v],
    )


def _jsonable(x, none="null"):
    if x is None:
        return none if none != "null" else None
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


@dataclass
class InequalityReport:
    mode: str
    alpha: float
    mu: float
    lhs: float
    measure: float
    partners: list[int]
    pairwise: list[float]
    rhs_by_family: dict = field(default_factory=dict)
    lhs_by_family: dict = field(default_factory=dict)
    k_by_family: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    reasons: dict = field(default_factory=dict)
    slack: dict = field(default_factory=dict)
    tolerance: dict = field(default_factory=dict)
    diagnostics: OrderingDiagnostics | None = None
    measure_provenance: dict = field(default_factory=dict)

    @property
    def violated(self) -> list[str]:
        return [f for f, v in self.verdicts.items() if v == VIOLATED]

    @property
    def any_violation(self) -> bool:
        return bool(self.violated)

    def to_json(self) -> dict:
        fams = list(self.verdicts)
        return {
            "mode": self.mode,
            "alpha": self.alpha,
            "mu": self.mu,
            "lhs": _jsonable(self.lhs),
            "measure": self.measure,
            "partners": list(self.partners),
            "pairwise": [float(v) for v in self.pairwise],
            "rhs_by_family": {f: _jsonable(self.rhs_by_family.get(f)) for f in fams},
            "lhs_by_family": {f: _jsonable(self.lhs_by_family.get(f)) for f in fams},
            "k_by_family": {f: self.k_by_family.get(f) for f in fams},
            "verdicts": dict(self.verdicts),
            "reasons": dict(self.reasons),
            "slack": {f: _jsonable(self.slack.get(f)) for f in fams},
            "tolerance": {f: _jsonable(self.tolerance.get(f)) for f in fams},
            "diagnostics": self.diagnostics.to_json() if self.diagnostics else None,
            "measure_provenance": self.measure_provenance,
        }


def _one_sided_error(res: RoofResult, mu: float, eps: float) -> float:
    """Largest change in ``E^μ`` allowed by a roof value's one-sided error."""
    if res.method != "roof":
        return 0.0
    v = res.value
    if res.bound == "upper":
        lo, hi = max(v - eps, 0.0), v
    else:
        lo, hi = v, v + eps
    if mu == 1:
        return hi - lo
    if lo == 0 and mu < 0:
        return math.inf
    return abs(_power(hi, mu) - _power(lo, mu))


def _pick_k(user_k, min_k):
    """k used for a family: the user's value if feasible, else the minimal one."""
    if min_k is None:
        return None, "ordering condition infeasible for every k in (0, 1]"
    if user_k is not None:
        if user_k + K_TOL < min_k:
            return None, f"ordering condition fails for k={user_k} (needs k >= {min_k:.6g})"
        return user_k, None
    # min_k == 0 leaves a single nonzero term, so the bound does not depend on k
    return (min_k if min_k > 0 else 1.0), None


@dataclass
class MeasuredTerms:
    """The one-vs-rest measure and the pairwise measures of one state."""

    mode: str
    alpha: float
    partners: list[int]
    lhs: RoofResult
    pairwise: list[RoofResult]


def measure_terms(
    rho: QuantumState,
    part,
    alpha: float,
    mode: str = "monogamy",
    opts: RoofOptions | None = None,
) -> MeasuredTerms:
    """RαE (monogamy) or RαEoA (polygamy) for focus | partners and each pair."""
    if mode not in ("monogamy", "polygamy"):
        raise ValueError(f"unknown mode {mode!r}")
    part = _partition(rho, part)
    opts = opts or RoofOptions()
    alpha = check_alpha(alpha)
    if mode == "polygamy":
        lhs = renyi_assistance(rho, part, alpha, opts)
        pair = [renyi_assistance(rho, PartitionSpec.pair(part.focus, j), alpha, opts) for j in part.partners]
    else:
        lhs = renyi_entanglement(rho, part, alpha, opts, decomposition=False)
        pair = [
            renyi_entanglement(rho, PartitionSpec.pair(part.focus, j), alpha, opts, decomposition=False)
            for j in part.partners
        ]
    return MeasuredTerms(mode, alpha, list(part.partners), lhs, pair)


def report_from_terms(
    terms: MeasuredTerms,
    params: BoundParams,
    opts: RoofOptions | None = None,
    families: Sequence[str] | None = None,
) -> InequalityReport:
    """Evaluate bound families on already computed measures (``params.alpha`` must match)."""
    opts = opts or RoofOptions()
    mode = terms.mode
    assisted = mode == "polygamy"
    if families is None:
        families = POLYGAMY_FAMILIES if assisted else MONOGAMY_FAMILIES
    alpha, mu = terms.alpha, float(params.mu)
    if float(params.alpha) != alpha:
        raise ValueError("params.alpha differs from the alpha the measures were computed at")
    lhs_res, pair_res = terms.lhs, terms.pairwise
    values = [r.value for r in pair_res]
    diag = ordering_diagnostics(values)
    sorted_vals = diag.sorted_values
    sorted_res = [pair_res[i] for i in diag.sorted_order]
    lhs_pow = _power(lhs_res.value, mu) if not (mu < 0 and lhs_res.value == 0) else math.inf
    rep = InequalityReport(
        mode=mode,
        alpha=alpha,
        mu=mu,
        lhs=lhs_pow,
        measure=lhs_res.value,
        partners=list(terms.partners),
        pairwise=values,
        diagnostics=diag,
        measure_provenance={
            "lhs": lhs_res.provenance(),
            "pairwise": [r.provenance() for r in pair_res],
        },
    )
    eps = opts.error_bound
    for fam in families:
        reason = _family_precondition(mode, fam, alpha, mu, sorted_vals)
        k = None
        if reason is None and fam in ("hamming", "exponent"):
            min_k = diag.geometric_min_k if fam == "hamming" else diag.sum_min_k
            k, reason = _pick_k(params.k, min_k)
        if reason is None and fam == "kim_exponent":
            if diag.sum_min_k is None:
                reason = "sum ordering condition fails at k=1"
        if reason is not None:
            rep.verdicts[fam] = NOT_APPLICABLE
            rep.reasons[fam] = reason
            rep.rhs_by_family[fam] = rep.slack[fam] = rep.lhs_by_family[fam] = None
            continue
        fmu = 1.0 if fam == "baseline" else mu
        bp = BoundParams(alpha, fmu, k, fam)
        if fam == "negative_mu":
            rhs = bound_negative_mu(sorted_vals, mu)
            coeffs = np.full(len(sorted_vals), 1.0 / (len(sorted_vals) - 1))
        else:
            rhs = bound_polygamy(sorted_vals, bp) if assisted else bound_monogamy(sorted_vals, bp)
            coeffs = _coefficients(len(sorted_vals), fam, fmu, k)
        lhs = lhs_res.value if fam == "baseline" else lhs_pow
        band = VERDICT_TOL + _one_sided_error(lhs_res, fmu, eps)
        band += sum(c * _one_sided_error(r, fmu, eps) for c, r in zip(coeffs, sorted_res))
        # negative_mu and polygamy bound the measure from above
        slack = (rhs - lhs) if (assisted or fam == "negative_mu") else (lhs - rhs)
        rep.k_by_family[fam] = k
        rep.rhs_by_family[fam] = rhs
        rep.lhs_by_family[fam] = lhs
        rep.slack[fam] = slack
        rep.tolerance[fam] = band
        rep.verdicts[fam] = VIOLATED if slack < -band else HOLDS
    return rep


def _family_precondition(mode, fam, alpha, mu, values) -> str | None:
    if mode == "monogamy":
        if alpha < 2:
            return f"monogamy bounds need alpha >= 2, got {alpha}"
        if fam == "negative_mu":
            if mu >= 0:
                return "negative_mu needs mu < 0"
            if len(values) < 2:
                return "negative_mu needs at least two partners"
            if any(v <= 0 for v in values):
                return "negative_mu needs every pairwise value to be nonzero"
            return None
        if fam != "baseline" and mu < 1:
            return f"{fam} monogamy needs mu >= 1, got {mu}"
        return None
    if not 0 < alpha < 2:
        return f"polygamy bounds need 0 < alpha < 2, got {alpha}"
    if fam != "baseline" and not 0 <= mu <= 1:
        return f"{fam} polygamy needs 0 <= mu <= 1, got {mu}"
    return None


def _partition(rho: QuantumState, part) -> PartitionSpec:
    if isinstance(part, PartitionSpec):
        return part
    return PartitionSpec.rest(int(part), rho.layout.n)


def check_monogamy(
    rho: QuantumState,
    part,
    params: BoundParams,
    opts: RoofOptions | None = None,
    families: Sequence[str] = MONOGAMY_FAMILIES,
) -> InequalityReport:
    """Evaluate every monogamy family for focus | partners.

    ``part`` is a :class:`PartitionSpec` or a focus index (all other
    subsystems become partners). Partners are sorted by decreasing pairwise
    RαE before the bounds are formed; the permutation is in the diagnostics.
    ``params.family`` is not used here.
    """
    terms = measure_terms(rho, part, params.alpha, "monogamy", opts)
    return report_from_terms(terms, params, opts, families)


def check_polygamy(
    rho: QuantumState,
    part,
    params: BoundParams,
    opts: RoofOptions | None = None,
    families: Sequence[str] = POLYGAMY_FAMILIES,
) -> InequalityReport:
    """Polygamy counterpart of :func:`check_monogamy`, built on RαEoA."""
    terms = measure_terms(rho, part, params.alpha, "polygamy", opts)
    return report_from_terms(terms, params, opts, families)


def figure_curves(which: int, mu_grid: Sequence[float]) -> np.ndarray:
    """Rows ``(μ, solid, dashed)`` of the two comparison curves.

    which=1: ``(μ, 2^μ, 1+μ)`` for μ ≥ 1;
    which=2: ``(μ, (2/3)^μ 2^μ, (2/3)^μ (1+μ))`` for 0 ≤ μ ≤ 1.
    """
    mu = np.asarray(mu_grid, dtype=float)
    if which == 1:
        if np.any(mu < 1):
            raise ValueError("figure 1 needs mu >= 1")
        return np.column_stack([mu, 2.0**mu, 1.0 + mu])
    if which == 2:
        if np.any((mu < 0) | (mu > 1)):
            raise ValueError("figure 2 needs 0 <= mu <= 1")
        base = (2.0 / 3.0) ** mu
        return np.column_stack([mu, base * 2.0**mu, base * (1.0 + mu)])
    raise ValueError(f"which must be 1 or 2, got {which}")
