"""Two-operator spectrum-contribution game solved by sequential best response.

Each operator eliminates its cellular equality constraint analytically
(beta_c = tau / R_c) and turns the intra-D2D rate floor into an upper
bound ``u`` on its contribution, so a best response is a one-dimensional
concave maximisation over [0, u].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coverage import band_curves, cellular_rate, rate_components
from .errors import CellularInfeasible, DomainError, IntraD2DInfeasible, NoConvergence, PropertyViolated
from .mode_selection import OperatorModes, multiop_ratio, select_modes
from .model import GameState, OperatorParams, RateReport, Scenario, SharedParams, TraceEntry

BR_TOL = 1e-6
NE_TOL = 1e-5
MAX_ITER = 100
FLAT_TOL = 1e-9

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FeasibleRegion:
    beta_c: float
    beta_d_min: float
    u: float


def feasible_region(op: OperatorParams, shared: SharedParams, modes: OperatorModes) -> FeasibleRegion:
    """Cellular share from the rate target, then the smallest intra-D2D share meeting its floor."""
    r_c = cellular_rate(modes.intra.alpha, shared.pl_cellular.exponent, op.nu)
    if not r_c > 0:
        raise CellularInfeasible(f"operator {op.id}: cellular spectral efficiency is {r_c}")
    beta_c = op.tau / r_c
    if beta_c > 1.0:
        raise CellularInfeasible(f"operator {op.id}: needs beta_c = {beta_c:.4f} > 1")
    intra, _ = band_curves(modes, op, shared)

    def g(x):
        return x * intra(x) if x > 0 else 0.0

    top = 1.0 - beta_c
    if op.mu_d == 0:
        return FeasibleRegion(beta_c, 0.0, top)
    if g(top) < op.mu_d:
        raise IntraD2DInfeasible(
            f"operator {op.id}: intra-D2D rate {g(top):.4f} < floor {op.mu_d} even without sharing"
        )
    lo, hi = 0.0, top
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if g(mid) >= op.mu_d:
            hi = mid
        else:
            lo = mid
    return FeasibleRegion(beta_c, hi, top - hi)


@dataclass
class OperatorModel:
    """Everything operator ``op`` needs to evaluate its utility, fixed before play."""

    op: OperatorParams
    shared: SharedParams
    modes: OperatorModes = field(init=False)
    region: FeasibleRegion = field(init=False)

    def __post_init__(self):
        self.modes = select_modes(self.op, self.shared)
        self.r_c = cellular_rate(self.modes.intra.alpha, self.shared.pl_cellular.exponent, self.op.nu)
        self.intra, self.common = band_curves(self.modes, self.op, self.shared)
        self.w = multiop_ratio(self.shared.lam, self.op.lambda_d)
        self.region = feasible_region(self.op, self.shared, self.modes)

    def report(self, beta_i: float, beta_j: float) -> RateReport:
        bc = self.region.beta_c
        return rate_components(
            bc,
            1.0 - bc - beta_i,
            beta_i + beta_j,
            self.r_c,
            self.intra,
            self.common,
            self.modes.intra.q,
            self.modes.shared.q,
            self.w,
        )

    def utility(self, beta_i: float, beta_j: float) -> float:
        return self.report(beta_i, beta_j).u

    def intra_rate(self, beta_i: float) -> float:
        """Left-hand side of the intra-D2D floor, beta_d R_d(beta_d)."""
        beta_d = 1.0 - self.region.beta_c - beta_i
        return beta_d * self.intra(beta_d) if beta_d > 0 else 0.0

    def baseline_utility(self) -> float:
        """Utility without sharing: multi-operator D2D traffic all goes through the BSs."""
        r = self.report(0.0, 0.0)
        q_s = r.q_c
        return (1.0 - self.w) * r.q_d + self.w * q_s


def build_players(scenario: Scenario) -> tuple[OperatorModel, OperatorModel]:
    return tuple(OperatorModel(op, scenario.shared) for op in scenario.operators)


def golden_section_max(f, lo: float, hi: float, tol: float = BR_TOL) -> float:
    """Maximiser of a unimodal ``f`` on [lo, hi]; endpoints are candidates too.

    Among candidates whose values are within FLAT_TOL of the best, the
    smallest argument wins.
    """
    if hi <= lo:
        return lo
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    xm = 0.5 * (a + b)
    candidates = [(lo, f(lo)), (xm, f(xm)), (hi, f(hi))]
    best = max(v for _, v in candidates)
    return min(x for x, v in candidates if v >= best - FLAT_TOL)


def best_response(player: OperatorModel, beta_j: float, tol: float = BR_TOL) -> float:
    """Contribution maximising the player's utility given the opponent's ``beta_j``."""
    if not (0 <= beta_j <= 1):
        raise DomainError(f"beta_j must lie in [0, 1], got {beta_j}")
    return golden_section_max(lambda x: player.utility(x, beta_j), 0.0, player.region.u, tol)


def find_equilibrium(
    scenario: Scenario,
    initial: tuple[float, float] = (0.0, 0.0),
    tol: float = NE_TOL,
    max_iter: int = MAX_ITER,
    br_tol: float = BR_TOL,
    first: int = 0,
    players: tuple[OperatorModel, OperatorModel] | None = None,
) -> GameState:
    """Alternate best responses from ``initial`` until both strategies settle.

    ``first`` selects which operator (0 or 1) moves first in every round.
    Raises NoConvergence after ``max_iter`` rounds; the partial state is on
    the exception as ``.state``.
    """
    if players is None:
        players = build_players(scenario)
    betas = [float(initial[0]), float(initial[1])]
    for k in range(2):
        if not (0 <= betas[k] <= players[k].region.u + 1e-12):
            raise DomainError(f"initial beta_{k + 1} = {betas[k]} outside [0, {players[k].region.u}]")

    def entry(it):
        return TraceEntry(
            it,
            betas[0],
            betas[1],
            players[0].utility(betas[0], betas[1]),
            players[1].utility(betas[1], betas[0]),
        )

    trace = [entry(0)]
    order = (first, 1 - first)
    baseline = (players[0].baseline_utility(), players[1].baseline_utility())
    for it in range(1, max_iter + 1):
        prev = list(betas)
        for i in order:
            betas[i] = best_response(players[i], betas[1 - i], br_tol)
        trace.append(entry(it))
        if max(abs(betas[0] - prev[0]), abs(betas[1] - prev[1])) < tol:
            last = trace[-1]
            ne_u = (last.u_1, last.u_2)
            return GameState(
                trace=trace,
                converged=True,
                ne=(betas[0], betas[1]),
                ne_utility=ne_u,
                baseline=baseline,
                agreement=ne_u[0] >= baseline[0] and ne_u[1] >= baseline[1],
            )
    exc = NoConvergence(f"best response did not settle within {max_iter} iterations")
    exc.state = GameState(trace, False, (betas[0], betas[1]), (trace[-1].u_1, trace[-1].u_2), baseline, False)
    raise exc


def sharing_gain(state: GameState) -> tuple[float, float]:
    """Relative utility gain of each operator at the NE over no sharing."""
    if not state.converged:
        raise DomainError("gain is defined only for a converged game")
    return tuple((u - u0) / u0 for u, u0 in zip(state.ne_utility, state.baseline))


def trace_is_monotone(state: GameState, slack: float = 1e-7) -> bool:
    """One operator's strategy never rises and the other's never falls after round 1."""
    b1 = np.array([e.beta_1 for e in state.trace[1:]])
    b2 = np.array([e.beta_2 for e in state.trace[1:]])
    d1, d2 = np.diff(b1), np.diff(b2)

    def up(d):
        return bool(np.all(d >= -slack))

    def down(d):
        return bool(np.all(d <= slack))

    return (up(d1) and down(d2)) or (down(d1) and up(d2))


@dataclass(frozen=True)
class DiagnosticRow:
    operator: int
    beta_i: float
    beta_j: float
    d2_own: float
    d2_cross: float
    d2_constraint: float
    concave: bool
    submodular: bool
    dominant: bool
    constraint_concave: bool

    @property
    def ok(self) -> bool:
        return self.concave and self.submodular and self.dominant and self.constraint_concave


@dataclass
class DiagnosticsReport:
    rows: list[DiagnosticRow]

    @property
    def violations(self) -> list[DiagnosticRow]:
        return [r for r in self.rows if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_properties(
    scenario: Scenario,
    grid_size: int = 10,
    step: float = 1e-4,
    strict: bool = False,
    players: tuple[OperatorModel, OperatorModel] | None = None,
) -> DiagnosticsReport:
    """Finite-difference curvature checks on an interior strategy lattice.

    At every point (beta_i, beta_j) of a ``grid_size`` x ``grid_size``
    lattice strictly inside [0, u_i] x [0, u_j], and for each operator:

    - own second derivative of U_i is negative (concavity),
    - cross derivative is negative (sub-modularity),
    - |own| > |cross| (diagonal dominance),
    - beta_d R_d(beta_d) is concave in beta_i (the constraint term).

    When w_i = 0 the utility ignores the opponent, the cross derivative is
    exactly zero and only the concavity checks apply. With ``strict`` the
    first failing point raises PropertyViolated.
    """
    if players is None:
        players = build_players(scenario)
    h = step
    rows = []
    for i in range(2):
        me, other = players[i], players[1 - i]
        coupled = me.w > 0
        ui, uj = me.region.u, other.region.u
        if ui <= 2 * h or uj <= 2 * h:
            raise DomainError(f"operator {i + 1}: strategy range too small for step {h}")
        pts_i = ui * (np.arange(grid_size) + 0.5) / grid_size
        pts_j = uj * (np.arange(grid_size) + 0.5) / grid_size
        U = me.utility
        for x in pts_i:
            x = float(np.clip(x, h, ui - h))
            for y in pts_j:
                y = float(np.clip(y, h, uj - h))
                u0 = U(x, y)
                own = (U(x + h, y) - 2.0 * u0 + U(x - h, y)) / (h * h)
                cross = (U(x + h, y + h) - U(x + h, y - h) - U(x - h, y + h) + U(x - h, y - h)) / (4.0 * h * h)
                g0 = me.intra_rate(x)
                con = (me.intra_rate(x + h) - 2.0 * g0 + me.intra_rate(x - h)) / (h * h)
                row = DiagnosticRow(
                    operator=i + 1,
                    beta_i=x,
                    beta_j=y,
                    d2_own=own,
                    d2_cross=cross,
                    d2_constraint=con,
                    concave=own < 0,
                    submodular=cross < 0 if coupled else True,
                    dominant=abs(own) > abs(cross) if coupled else True,
                    constraint_concave=con < 0,
                )
                if strict and not row.ok:
                    raise PropertyViolated(f"curvature check failed at {row}", point=(i + 1, x, y))
                rows.append(row)
    return DiagnosticsReport(rows)
