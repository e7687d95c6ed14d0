"""Scenario types for the two-operator overlay D2D model.

Powers are carried in dBm on the dataclasses and converted to linear
milliwatts through properties; distances are meters and densities m^-2.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

from .errors import InvalidDensity, InvalidFraction, PathlossTooFlat

FRACTION_SUM_TOL = 1e-9

# Base-station density used throughout the numerical illustration: one BS
# per disc of radius 200 m.
DEFAULT_LAMBDA_B = 1.0 / (math.pi * 200.0**2)


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


@dataclass(frozen=True)
class PathlossModel:
    """Log-distance law: loss_dB(r) = slope * log10(r) + intercept."""

    slope_db_per_decade: float
    intercept_db: float

    @property
    def exponent(self) -> float:
        """Equivalent power-law exponent a, with gain proportional to r^-a."""
        return self.slope_db_per_decade / 10.0


@dataclass(frozen=True)
class OperatorParams:
    id: int
    lambda_b: float
    lambda_c: float
    lambda_d: float
    tau: float = 0.3
    mu_d: float = 0.3
    eps_d_dbm: float = -75.0
    nu: float = 1.0


@dataclass(frozen=True)
class SharedParams:
    lam: float
    eps_dbm: float = -72.0
    d: float = 30.0
    pt_d_dbm: float = 20.0
    pt_c_dbm: float = 23.0
    # thermal noise -174 dBm/Hz over a 10 MHz band
    noise_dbm: float = -104.0
    pl_cellular: PathlossModel = field(default_factory=lambda: PathlossModel(37.6, 15.3))
    pl_d2d: PathlossModel = field(default_factory=lambda: PathlossModel(40.0, 28.0))

    @property
    def pt_d_mw(self) -> float:
        return dbm_to_mw(self.pt_d_dbm)

    @property
    def noise_mw(self) -> float:
        return dbm_to_mw(self.noise_dbm)

    @property
    def eps_mw(self) -> float:
        return dbm_to_mw(self.eps_dbm)

    @property
    def per_operator_lambda(self) -> float:
        return self.lam / 2.0


@dataclass(frozen=True)
class SpectrumPartition:
    beta_c: float
    beta_d: float
    beta: float

    def __post_init__(self):
        for name in ("beta_c", "beta_d", "beta"):
            v = getattr(self, name)
            if not (-FRACTION_SUM_TOL <= v <= 1.0 + FRACTION_SUM_TOL):
                raise InvalidFraction(name, f"{v} outside [0, 1]")
        total = self.beta_c + self.beta_d + self.beta
        if abs(total - 1.0) > FRACTION_SUM_TOL:
            raise InvalidFraction("beta_c+beta_d+beta", f"sums to {total!r}, not 1")

    @classmethod
    def from_contribution(cls, beta_c: float, beta: float) -> "SpectrumPartition":
        """Partition whose intra-operator D2D share takes the remainder."""
        return cls(beta_c=beta_c, beta_d=1.0 - beta_c - beta, beta=beta)


@dataclass(frozen=True)
class ModeSelectionOutcome:
    delta: float
    q: float
    cellular_mode_density: float
    alpha: float


@dataclass(frozen=True)
class RateReport:
    r_c: float
    r_d: float
    r_shared: float
    q_c: float
    q_d: float
    q_s: float
    u: float
    w: float


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    beta_1: float
    beta_2: float
    u_1: float
    u_2: float


@dataclass
class GameState:
    trace: list[TraceEntry]
    converged: bool
    ne: tuple[float, float]
    ne_utility: tuple[float, float]
    baseline: tuple[float, float]
    agreement: bool


@dataclass(frozen=True)
class Scenario:
    operators: tuple[OperatorParams, OperatorParams]
    shared: SharedParams

    def with_operator(self, index: int, **changes) -> "Scenario":
        ops = list(self.operators)
        ops[index] = replace(ops[index], **changes)
        return validate_scenario(tuple(ops), self.shared)

    def with_shared(self, **changes) -> "Scenario":
        return validate_scenario(self.operators, replace(self.shared, **changes))


def _check_density(name: str, value: float, positive: bool = False) -> None:
    if not math.isfinite(value) or value < 0 or (positive and value == 0):
        bound = "> 0" if positive else ">= 0"
        raise InvalidDensity(name, f"{value!r} must be finite and {bound}")


def _check_fraction(name: str, value: float, lo: float, hi: float, lo_open: bool, hi_open: bool) -> None:
    ok = math.isfinite(value)
    ok = ok and (value > lo if lo_open else value >= lo)
    ok = ok and (value < hi if hi_open else value <= hi)
    if not ok:
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise InvalidFraction(name, f"{value!r} outside {lb}{lo}, {hi}{rb}")


def _check_pathloss(name: str, model: PathlossModel) -> None:
    if not math.isfinite(model.intercept_db):
        raise PathlossTooFlat(f"{name}.intercept_db", "must be finite")
    if not (model.slope_db_per_decade > 20.0):
        raise PathlossTooFlat(
            f"{name}.slope_db_per_decade",
            f"{model.slope_db_per_decade!r} dB/decade; interference integrals need > 20",
        )


def validate_scenario(operators, shared: SharedParams) -> Scenario:
    """Check every invariant and return an immutable :class:`Scenario`.

    Raises InvalidDensity, InvalidFraction or PathlossTooFlat naming the
    offending field, prefixed by ``operators[k].`` or ``shared.``.
    """
    operators = tuple(operators)
    if len(operators) != 2:
        raise InvalidFraction("operators", f"exactly two operators required, got {len(operators)}")
    for k, op in enumerate(operators):
        p = f"operators[{k}]."
        if op.id not in (1, 2):
            raise InvalidFraction(p + "id", f"{op.id!r} not in {{1, 2}}")
        _check_density(p + "lambda_b", op.lambda_b, positive=True)
        _check_density(p + "lambda_c", op.lambda_c)
        _check_density(p + "lambda_d", op.lambda_d)
        _check_fraction(p + "tau", op.tau, 0.0, 1.0, True, True)
        _check_fraction(p + "mu_d", op.mu_d, 0.0, 1.0, False, True)
        _check_fraction(p + "nu", op.nu, 0.0, 1.0, True, False)
        if not math.isfinite(op.eps_d_dbm):
            raise InvalidFraction(p + "eps_d_dbm", "must be finite")
    if operators[0].id == operators[1].id:
        raise InvalidFraction("operators[1].id", "operator ids must differ")

    _check_density("shared.lam", shared.lam)
    if not (math.isfinite(shared.d) and shared.d > 0):
        raise InvalidDensity("shared.d", f"{shared.d!r} must be > 0")
    for name in ("eps_dbm", "pt_d_dbm", "pt_c_dbm", "noise_dbm"):
        if not math.isfinite(getattr(shared, name)):
            raise InvalidFraction(f"shared.{name}", "must be finite")
    _check_pathloss("shared.pl_cellular", shared.pl_cellular)
    _check_pathloss("shared.pl_d2d", shared.pl_d2d)
    return Scenario(operators=operators, shared=shared)


def default_scenario(
    lambda2d_ratio: float = 1.0,
    eps_dbm: float = -72.0,
    eps_d_dbm: float = -75.0,
    **shared_overrides,
) -> Scenario:
    """Default two-operator scenario; ``lambda2d_ratio`` scales operator 2's intra-D2D load."""
    lb = DEFAULT_LAMBDA_B
    op1 = OperatorParams(id=1, lambda_b=lb, lambda_c=lb, lambda_d=lb, eps_d_dbm=eps_d_dbm)
    op2 = replace(op1, id=2, lambda_d=lambda2d_ratio * lb)
    shared = SharedParams(lam=4 * lb, eps_dbm=eps_dbm, **shared_overrides)
    return validate_scenario((op1, op2), shared)


def scenario_to_dict(scenario: Scenario) -> dict:
    ops = []
    for op in scenario.operators:
        row = asdict(op)
        row.pop("id")
        ops.append(row)
    s = scenario.shared
    shared = {
        "lambda": s.lam,
        "eps_dbm": s.eps_dbm,
        "d": s.d,
        "pt_d_dbm": s.pt_d_dbm,
        "pt_c_dbm": s.pt_c_dbm,
        "noise_dbm": s.noise_dbm,
        "pl_cellular": {"slope": s.pl_cellular.slope_db_per_decade, "intercept": s.pl_cellular.intercept_db},
        "pl_d2d": {"slope": s.pl_d2d.slope_db_per_decade, "intercept": s.pl_d2d.intercept_db},
    }
    return {"operators": ops, "shared": shared}
