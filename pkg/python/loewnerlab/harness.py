#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
TheoremHarness: Scenario Library and Driving-Regularity Experiments

This module ties the solvers and the metric modules together. A Scenario
names a curve family or a driving function with its parameters; the
TheoremHarness turns scenarios into Reports, tables of named checks with a
pass flag, a margin and the fitted constants.

Key features:
- Slit experiments: modulus of continuity of zipper drivings and its
  stability under refinement
- Lip(1/2) and weak-Lip(1/2) geometric condition checkers on forward or
  fitted chains, with candidate points chosen by maximal boundary distance
- Hölder sub-invariance of restricted and transition domains
- Brownian drivings: variance and Lévy-modulus pass rates over seeds
- Lip(1/2) regime scan: simplicity of traces of c(1 − √(1 − t))
- Parallel scenario execution with joblib

Upstream dependencies:
- ForwardSolver, ZipperSolver, MetricAnalysis and the curve families

Downstream applications:
- The ``loewner harness`` command
- LoewnerVisualization report plots

Version: 0.1.0
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from .config import DEFAULT_CONFIG
from .core_model import (
    CapacityGrid,
    Driving,
    HullCurve,
    lip_half_norm,
    modulus_of_continuity,
)
from .curves import make_curve, vertical_ray
from .exceptions import InvalidArgumentError, LoewnerLabError
from .forward_solver import ForwardSolver, LoewnerEvolution
from .inverse_solver import ZipperSolver, lambda_diameter_margins, weak_lip_check
from .metric_analysis import REPORT_COLUMNS, MetricAnalysis
from .utils.geometry import point_set_diameter
from .utils.logging_utils import VerboseMixin

SUITES = ("slit", "johnprop", "nonslit", "subinv", "brownian")
BROWNIAN_PARAMS = {"kappa", "n", "n_seeds", "variance_seeds"}
# at most this many trace points enter an internal-diameter computation
MAX_DIAMETER_POINTS = 6


def brownian_driving(kappa: float, T: float, n: int, seed: int = 0) -> Driving:
    """
    Scaled random walk λ = √κ·B on the uniform n-point grid over [0, T].

    Increments are √(κΔt)·ξ_i with fair signs ξ_i = ±1.

    Examples:
        >>> brownian_driving(0.0, 1.0, 100, seed=1).sup_norm()
        0.0
    """
    if n < 2:
        raise InvalidArgumentError(f"a Brownian driving needs n >= 2, got {n}")
    if kappa < 0:
        raise InvalidArgumentError(f"kappa must be nonnegative, got {kappa}")
    rng = np.random.default_rng(seed)
    grid = CapacityGrid.uniform(T, n)
    signs = rng.integers(0, 2, n - 1) * 2 - 1
    steps = np.sqrt(kappa * grid.dt) * signs
    values = np.concatenate([[0.0], np.cumsum(steps)])
    return Driving(grid, values, "brownian", {"kappa": kappa, "seed": seed})


def held_out_margin(ratios: Sequence[float]) -> Tuple[float, float]:
    """
    Fit Ĉ on the even-indexed ratios and test it on the odd-indexed ones.

    Returns:
        Tuple[float, float]: Ĉ_fit and Ĉ_fit minus the largest held-out ratio
        (infinite when fewer than two ratios are available).
    """
    ratios = np.asarray(ratios, dtype=float)
    if ratios.size == 0:
        return 0.0, np.inf
    C_fit = float(ratios[0::2].max())
    if ratios.size < 2:
        return C_fit, np.inf
    return C_fit, C_fit - float(ratios[1::2].max())


def _row(check: str, passed: bool, margin: float, asserted: bool = True, **params) -> Dict:
    params["asserted"] = bool(asserted)
    return {"check": check, "passed": bool(passed), "margin": float(margin), "params": params}


@dataclass
class Scenario:
    """
    A named experiment input.

    Attributes:
        name (str): Report name.
        suite (str): One of 'slit', 'johnprop', 'nonslit', 'subinv', 'brownian'.
        family (Optional[str]): Curve family for curve-based scenarios.
        driving (Optional[str]): Driving type for forward-simulated scenarios.
        params (Dict): Generator parameters.
        seed (int): Seed of every random choice in the scenario.
        resolution (int): Vertices or grid points.
        T (Optional[float]): Final capacity time; driving-based scenarios
            default to 1 and the brownian suite to its configured T.
    """

    name: str
    suite: str
    family: Optional[str] = None
    driving: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 42
    resolution: int = 400
    T: Optional[float] = None

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], seed: int = 42,
                  resolution: int = 400) -> "Scenario":
        payload = dict(payload)
        suite = payload.pop("suite")
        if suite not in SUITES:
            raise InvalidArgumentError(f"Unsupported suite: {suite}")
        family = payload.pop("family", None)
        driving = payload.pop("driving", None)
        name = payload.pop("name", None)
        seed = int(payload.pop("seed", seed))
        resolution = int(payload.pop("resolution", resolution))
        T = payload.pop("T", None)
        T = None if T is None else float(T)
        if name is None:
            tag = "-".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}"
                           for k, v in sorted(payload.items()))
            name = "_".join(p for p in (suite, family or driving or "", tag) if p)
        return cls(name, suite, family, driving, payload, seed, resolution, T)

    def build_curve(self, n: Optional[int] = None) -> HullCurve:
        if self.family is None:
            raise InvalidArgumentError(f"scenario {self.name} has no curve family")
        return make_curve(self.family, n or self.resolution, **self.params)

    def build_driving(self, n: Optional[int] = None) -> Driving:
        if self.driving is None:
            raise InvalidArgumentError(f"scenario {self.name} has no driving")
        params = dict(self.params)
        params.setdefault("seed", self.seed)
        T = 1.0 if self.T is None else self.T
        return Driving.from_kind(self.driving, T, n or self.resolution, params)


@dataclass
class Report:
    """
    Outcome of one scenario.

    Attributes:
        name (str): Scenario name.
        suite (str): Suite the scenario belongs to.
        rows (pd.DataFrame): Columns check, passed, margin, params. Rows whose
            params carry ``asserted=False`` are recorded only.
        constants (Dict[str, float]): Fitted constants.
    """

    name: str
    suite: str
    rows: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=REPORT_COLUMNS))
    constants: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_rows(cls, name: str, suite: str, rows: List[Dict],
                  constants: Optional[Dict[str, Any]] = None) -> "Report":
        return cls(name, suite, pd.DataFrame(rows, columns=REPORT_COLUMNS), dict(constants or {}))

    @property
    def asserted(self) -> pd.Series:
        return self.rows["params"].map(lambda p: bool(p.get("asserted", True)))

    @property
    def passed(self) -> bool:
        """All asserted rows pass."""
        if len(self.rows) == 0:
            return True
        return bool(self.rows.loc[self.asserted, "passed"].all())

    def to_frame(self) -> pd.DataFrame:
        df = self.rows.copy()
        df.insert(0, "scenario", self.name)
        return df


class TheoremHarness(VerboseMixin):
    """
    Runs the regularity experiments and condition checkers.

    Attributes:
        config (Dict): Full configuration.
        n_jobs (int): Parallel scenario jobs.
        verbose (bool): Whether to print progress messages.

    Examples:
        >>> harness = TheoremHarness()
        >>> report = harness.run_theorem_slit("segment", 100, angle=0.5)
        >>> round(report.constants["C_hat"], 6)
        0.0
    """

    def __init__(self, config: Optional[Dict] = None, verbose: bool = False,
                 n_jobs: Optional[int] = None):
        self.config = config or DEFAULT_CONFIG
        self.cfg = self.config["harness"]
        self.n_jobs = int(n_jobs if n_jobs is not None else self.cfg.get("n_jobs", 1))
        self.verbose = verbose
        self.forward = ForwardSolver(self.config)
        self.zipper = ZipperSolver(self.config)
        self.metric = MetricAnalysis(self.config)

    # ------------------------------------------------------------------
    # Slit experiments
    # ------------------------------------------------------------------
    def _omega_constant(self, d: Driving, deltas: np.ndarray) -> Tuple[float, pd.DataFrame]:
        table = modulus_of_continuity(d, deltas)
        table["scale"] = np.sqrt(table["delta"] * np.log(1.0 / table["delta"]))
        table["ratio"] = table["omega"] / table["scale"]
        return float(table["ratio"].max()), table

    def run_theorem_slit(self, family: str, n: int, **params) -> Report:
        """
        Fit Ĉ in ω(δ) <= Ĉ·√(δ log(1/δ)) for the zipper driving of a curve
        family at resolutions n and 2n.

        δ runs over T·2^{-k} for the configured k, restricted to windows of at
        least the coarse grid spacing and below 1. The report also checks
        |λ_s − λ_{s+δ}| <= 4·diam(K_{s,s+δ}) + 10√Δt at δ = T/8 and records the
        Hölder exponent of the fitted domain.

        Returns:
            Report: Rows 'C_hat_stable', 'lambda_diameter' and
            'holder_precondition'; constants C_hat, C_hat_refined, beta_hat.
        """
        name = f"slit_{family}" + "".join(f"_{k}={v:.4g}" for k, v in sorted(params.items()))
        fits, zippers = [], []
        for resolution in (n, 2 * n):
            curve = make_curve(family, resolution, **params)
            zippers.append(self.zipper.extract_driving(curve))
        coarse = zippers[0]
        T = coarse.T
        k = np.asarray(self.cfg.get("deltas_log2", list(range(3, 13))), dtype=float)
        deltas = T * 2.0 ** (-k)
        floor = max(z.driving.grid.max_spacing for z in zippers)
        deltas = deltas[(deltas >= floor) & (deltas < 1.0)]
        if deltas.size == 0:
            raise InvalidArgumentError("no window length fits between the grid spacing and 1")
        tables = []
        for z in zippers:
            c_hat, table = self._omega_constant(z.driving, deltas)
            fits.append(c_hat)
            tables.append(table)
        c_n, c_2n = fits
        scale = max(c_n, c_2n)
        stable = scale <= 1e-9 or abs(c_n - c_2n) <= self.cfg.get("stability_tol", 0.25) * scale
        rows = [_row("C_hat_stable", np.isfinite(scale) and stable,
                     self.cfg.get("stability_tol", 0.25) * scale - abs(c_n - c_2n),
                     C_hat=c_n, C_hat_refined=c_2n, deltas=deltas.tolist())]

        profile = self.zipper.transition_diameter_profile(coarse, max(T / 8.0, floor))
        ok, margin = lambda_diameter_margins(profile, coarse.driving.grid.max_spacing)
        rows.append(_row("lambda_diameter", ok, margin, delta=float(profile.attrs["delta"])))

        holder = self.metric.holder_exponent(coarse.to_evolution(), T, per_height_samples=401)
        rows.append(_row("holder_precondition", not holder.flagged, holder.fit_residual,
                         asserted=False, beta_hat=holder.beta_hat, c1_hat=holder.c1_hat))
        self.log(f"{name}: Ĉ = {c_n:.4g} -> {c_2n:.4g}")
        return Report.from_rows(name, "slit", rows, {
            "C_hat": c_n, "C_hat_refined": c_2n, "beta_hat": holder.beta_hat,
            "omega": tables[0][["delta", "omega", "ratio"]].to_dict(orient="list")})

    # ------------------------------------------------------------------
    # Geometric condition checkers
    # ------------------------------------------------------------------
    def default_pairs(self, e: LoewnerEvolution) -> List[Tuple[float, float]]:
        """(s, t) grid pairs with s in {0, T/4, T/2} and t in {s + T/8, T}."""
        t_values = e.grid.t_values
        T = e.T
        pairs = []
        for s in (0.0, 0.25 * T, 0.5 * T):
            i = e.grid.index_at_or_before(s)
            for t in (s + 0.125 * T, T):
                j = max(e.grid.index_at_or_before(t), i + 1)
                if j < t_values.size:
                    pairs.append((float(t_values[i]), float(t_values[j])))
        return sorted(set(pairs))

    def _pair_geometry(self, e: LoewnerEvolution, s: float, t: float) -> Dict[str, Any]:
        """Trace increment, Ω_s, the max-δ candidate z0 and the internal diameter."""
        i, j = e.grid.index_of(s), e.grid.index_of(t)
        spec = e.domain_at(s)
        pts = e.trace[i + 1:j + 1]
        delta = spec.delta(pts)
        keep = (pts.imag > 0) & (delta > 0)
        if not keep.any():
            raise LoewnerLabError(f"no trace point of ({s}, {t}] lies in the domain at s")
        pts, delta = pts[keep], delta[keep]
        k = int(np.argmax(delta))
        z0, dz0 = complex(pts[k]), float(delta[k])
        pick = np.unique(np.concatenate([[0, pts.size - 1, k],
                                         np.linspace(0, pts.size - 1,
                                                     MAX_DIAMETER_POINTS).astype(int)]))
        sample = pts[pick]
        D = point_set_diameter(pts)
        x_lo, x_hi, _, y_hi = spec.bbox
        resolution = max(D / 32.0, np.hypot(x_hi - x_lo, y_hi) / 512.0, 1e-6)
        return {"spec": spec, "points": pts, "sample": sample, "z0": z0, "delta_z0": dz0,
                "diam": D, "resolution": resolution}

    def _john_ray(self, e: LoewnerEvolution, s: float, x: complex, spec) -> np.ndarray:
        """Image under f_s of the vertical ray above g_s(x), tip first."""
        w = complex(self.metric._pullback(e, s, x)[0])
        x_lo, x_hi, _, y_hi = spec.bbox
        top = w.imag + 100.0 * (np.hypot(x_hi - x_lo, y_hi) + abs(w))
        ray = vertical_ray(w, top, 200)
        alpha = self.metric._push(e, s, ray)
        alpha[0] = x
        return alpha

    def check_johnprop_conditions(self, e: LoewnerEvolution,
                                  pairs: Optional[Sequence[Tuple[float, float]]] = None,
                                  name: str = "johnprop") -> Report:
        """
        Measure the Lip(1/2) geometric conditions on pairs (s, t).

        For each pair z0 is the trace point of (s, t] farthest from ∂Ω_s;
        C0 = diam_{Ω_s}(K_t \\ K_s)/δ_{Ω_s}(z0) and L comes from john_verify on
        the pullback of the vertical ray above g_s(z0). The semi-norm of the
        driving is compared with lip_scan_factor·L̂·Ĉ0 when both conditions
        hold.

        Returns:
            Report: Rows 'condition_diameter', 'condition_john' and
            'lip_bound'; constants C0_hat, L_hat, lip_norm, lip_bound_holds.
        """
        if e.trace is None:
            raise InvalidArgumentError("condition checks need a trace")
        pairs = list(pairs) if pairs is not None else self.default_pairs(e)
        C0_max = float(self.cfg.get("C0_max", 50.0))
        C0s, Ls, details = [], [], []
        for s, t in pairs:
            geo = self._pair_geometry(e, s, t)
            diam_int = self.metric.internal_diameter(geo["spec"], geo["sample"],
                                                     geo["resolution"])
            C0 = diam_int / geo["delta_z0"]
            try:
                alpha = self._john_ray(e, s, geo["z0"], geo["spec"])
                L = self.metric.john_verify(geo["spec"], alpha, np.inf).L_min
            except LoewnerLabError:
                L = np.inf
            C0s.append(C0)
            Ls.append(L)
            details.append({"s": s, "t": t, "C0": C0, "L": L})
            self.log(f"pair ({s:.4g}, {t:.4g}): C0={C0:.4g}, L={L:.4g}")
        C0_hat, L_hat = max(C0s), max(Ls)
        norm = lip_half_norm(e.driving, window=None if e.grid.n <= 20_000 else 0.5)
        conditions_hold = C0_hat <= C0_max and L_hat <= C0_max
        bound = float(self.cfg.get("lip_scan_factor", 4.0)) * L_hat * C0_hat
        holds = bool(conditions_hold and norm <= bound)
        rows = [
            _row("condition_diameter", C0_hat <= C0_max, C0_max - C0_hat, C0_hat=C0_hat),
            _row("condition_john", L_hat <= C0_max, C0_max - L_hat, L_hat=L_hat),
            _row("lip_bound", holds, bound - norm, asserted=conditions_hold,
                 lip_norm=norm, bound=bound),
        ]
        return Report.from_rows(name, "johnprop", rows, {
            "C0_hat": C0_hat, "L_hat": L_hat, "lip_norm": norm, "lip_bound_holds": holds,
            "pairs": details})

    def check_nonslit_conditions(self, e: LoewnerEvolution,
                                 pairs: Optional[Sequence[Tuple[float, float]]] = None,
                                 beta: Optional[float] = None,
                                 name: str = "nonslit") -> Report:
        """
        Measure the weak-Lip(1/2) conditions on pairs (s, t) and check the
        conclusion |λ_s − λ_t| <= Ĉ·√|s−t|·(log 1/|s−t|)^{1/β̂}.

        z0 is the trace point of (s, t] farthest from ∂Ω_s; x0 is the best of
        the points z0 + i·m·diam, m in {1/4, 1/2, 1, 2}, for the first
        condition. β̂ defaults to the Hölder exponent of Ω_T.
        The conclusion row is recorded only: Ĉ is fitted on every other pair
        with t − s <= 1/2 and its margin is measured on the remaining ones.

        Returns:
            Report: One row per condition, the conclusion row and constants
            C0_hat, L_hat, beta_hat, C_hat.
        """
        if e.trace is None:
            raise InvalidArgumentError("condition checks need a trace")
        pairs = list(pairs) if pairs is not None else self.default_pairs(e)
        if beta is None:
            beta = self.metric.holder_exponent(e, e.T, per_height_samples=401).beta_hat
        C0_max = float(self.cfg.get("C0_max", 50.0))
        c_i, c_ii, c_iv, Ls, ratios, details = [], [], [], [], [], []
        for s, t in pairs:
            geo = self._pair_geometry(e, s, t)
            spec, D = geo["spec"], geo["diam"]
            diam_int = self.metric.internal_diameter(spec, geo["sample"], geo["resolution"])
            best = None
            for m in (0.25, 0.5, 1.0, 2.0):
                x0 = geo["z0"] + 1j * m * max(D, geo["delta_z0"])
                dx0 = float(spec.delta(x0)[0])
                if dx0 <= 0:
                    continue
                spread = self.metric.internal_diameter(
                    spec, np.concatenate([[x0], geo["sample"]]), geo["resolution"])
                if best is None or spread / dx0 < best[1]:
                    best = (x0, spread / dx0)
            if best is None:
                raise LoewnerLabError(f"no base point candidate for pair ({s}, {t})")
            x0, cond_i = best
            dz0 = geo["delta_z0"]
            cond_ii = diam_int / (dz0 * (1.0 + max(np.log(1.0 / dz0), 0.0)))
            try:
                L = self.metric.john_verify(spec, self._john_ray(e, s, x0, spec), np.inf).L_min
            except LoewnerLabError:
                L = np.inf
            rho = self.metric.hyperbolic_distance(e, s, x0, geo["z0"])
            cond_iv = rho - max(np.log(diam_int / dz0), 0.0) / beta
            c_i.append(cond_i)
            c_ii.append(cond_ii)
            c_iv.append(cond_iv)
            Ls.append(L)
            h = t - s
            jump = abs(float(e.driving.value_at(t)) - float(e.driving.value_at(s)))
            if h <= 0.5:
                ratios.append(jump / (np.sqrt(h) * np.log(1.0 / h) ** (1.0 / beta)))
            details.append({"s": s, "t": t, "x0": [x0.real, x0.imag], "C0_i": cond_i,
                            "C0_ii": cond_ii, "C0_iv": cond_iv, "L": L})
        C0_hat = max(max(c_i), max(c_ii), max(c_iv), 0.0)
        L_hat = max(Ls)
        C_hat = max(ratios) if ratios else 0.0
        C_fit, margin = held_out_margin(ratios)
        rows = [
            _row("condition_base_diameter", max(c_i) <= C0_max, C0_max - max(c_i)),
            _row("condition_log_diameter", max(c_ii) <= C0_max, C0_max - max(c_ii)),
            _row("condition_john", L_hat <= C0_max, C0_max - L_hat),
            _row("condition_hyperbolic", max(c_iv) <= C0_max, C0_max - max(c_iv),
                 beta=beta),
            _row("conclusion", margin >= 0, margin, asserted=False, C_hat=C_hat, C_fit=C_fit,
                 held_out=len(ratios) // 2),
        ]
        self.log(f"{name}: Ĉ0={C0_hat:.4g}, L̂={L_hat:.4g}, β̂={beta:.4g}, Ĉ={C_hat:.4g}")
        return Report.from_rows(name, "nonslit", rows, {
            "C0_hat": C0_hat, "L_hat": L_hat, "beta_hat": beta, "C_hat": C_hat,
            "pairs": details})

    # ------------------------------------------------------------------
    # Hölder sub-invariance
    # ------------------------------------------------------------------
    def run_subinvariance_experiment(self, curve: HullCurve, s_values: Sequence[float],
                                     name: str = "subinv") -> Report:
        """
        Compare Hölder exponents of Ω_T, of restricted domains Ω_s and of the
        transition domains g_s(Ω_T) for capacity fractions s/T in s_values.

        Asserts β̂(Ω_s) >= β̂(Ω_T) − 0.1 and β̂(g_s(Ω_T)) >= β̂(Ω_T)/2 − 0.1.
        """
        zipper = self.zipper.extract_driving(curve)
        e = zipper.to_evolution()
        T = e.T
        base = self.metric.holder_exponent(e, T, per_height_samples=401).beta_hat
        rows, constants = [], {"beta_T": base}
        for frac in s_values:
            s = float(e.grid.t_values[e.grid.index_at_or_before(frac * T)])
            if s > 0:
                beta_s = self.metric.holder_exponent(e, s, per_height_samples=401).beta_hat
                rows.append(_row(f"restriction_s={s:.4g}", beta_s >= base - 0.1,
                                 beta_s - (base - 0.1), beta=beta_s))
                constants[f"beta_restrict_{s:.4g}"] = beta_s
            if s < T:
                shifted = e.shifted(s) if s > 0 else e
                beta_g = self.metric.holder_exponent(shifted, shifted.T,
                                                     per_height_samples=401).beta_hat
                rows.append(_row(f"transition_s={s:.4g}", beta_g >= base / 2 - 0.1,
                                 beta_g - (base / 2 - 0.1), beta=beta_g))
                constants[f"beta_transition_{s:.4g}"] = beta_g
        return Report.from_rows(name, "subinv", rows, constants)

    # ------------------------------------------------------------------
    # Brownian drivings
    # ------------------------------------------------------------------
    def run_brownian(self, kappa: Optional[float] = None, T: Optional[float] = None,
                     n: Optional[int] = None, n_seeds: Optional[int] = None,
                     variance_seeds: int = 1000, seed: int = 0,
                     name: str = "brownian") -> Report:
        """
        Variance of λ_T over seeds and the weak-Lip pass rate at c = 2√2.

        Seeds run from ``seed`` upward. Both checks are statistical with the
        configured thresholds (±10% variance, pass rate >= 0.95).
        """
        cfg = self.cfg.get("brownian", {})
        kappa = float(cfg.get("kappa", 1.0) if kappa is None else kappa)
        T = float(cfg.get("T", 0.25) if T is None else T)
        n = int(cfg.get("n", 2 ** 14) if n is None else n)
        n_seeds = int(cfg.get("n_seeds", 100) if n_seeds is None else n_seeds)

        finals = np.array([brownian_driving(kappa, T, n, seed + k).values[-1]
                           for k in range(variance_seeds)])
        variance = float(finals.var())
        target = kappa * T
        rows = [_row("variance", abs(variance - target) <= 0.1 * target + 1e-15,
                     0.1 * target - abs(variance - target), variance=variance, target=target)]

        c = float(self.cfg.get("weak_lip_c", 2.0 * np.sqrt(2.0)))
        results = Parallel(n_jobs=self.n_jobs)(
            delayed(weak_lip_check)(brownian_driving(kappa, T, n, seed + k), c)
            for k in range(n_seeds))
        rate = float(np.mean([r["passed"] for r in results]))
        threshold = float(self.cfg.get("weak_lip_pass_rate", 0.95))
        rows.append(_row("weak_lip_pass_rate", rate >= threshold, rate - threshold,
                         rate=rate, c=c, n=n, seeds=n_seeds))
        self.log(f"Brownian κ={kappa}: Var(λ_T)={variance:.4g}, pass rate {rate:.2%}")
        return Report.from_rows(name, "brownian", rows, {"variance": variance, "pass_rate": rate})

    # ------------------------------------------------------------------
    # Lip(1/2) regime
    # ------------------------------------------------------------------
    def run_lip_regime_scan(self, c_values: Sequence[float], n: int = 1000, T: float = 0.99,
                            tol: float = 1e-3) -> pd.DataFrame:
        """
        Forward traces of λ = c(1 − √(1 − t)) and their numeric simplicity.

        Returns:
            pd.DataFrame: Columns c, lip_norm, simple.
        """
        rows = []
        for c in c_values:
            d = Driving.from_function(lambda t, c=c: c * (1.0 - np.sqrt(1.0 - t)), T, n,
                                      "samples", {"c": c})
            e = self.forward.solve_forward(d, "vertical")
            simple = not e.hull_at(e.T).is_self_intersecting(tol)
            rows.append({"c": float(c), "lip_norm": lip_half_norm(d), "simple": simple})
            self.log(f"c={c:.3g}: simple={simple}")
        return pd.DataFrame(rows)

    # ------------------------------------------------------------------
    # Scenario execution
    # ------------------------------------------------------------------
    def _evolution_for(self, scenario: Scenario) -> LoewnerEvolution:
        if scenario.driving is not None:
            return self.forward.solve_forward(scenario.build_driving())
        return self.zipper.extract_driving(scenario.build_curve()).to_evolution()

    def run_scenario(self, scenario: Scenario) -> Report:
        """Run one scenario; construction failures become a failed report row."""
        try:
            if scenario.suite == "slit":
                report = self.run_theorem_slit(scenario.family, scenario.resolution,
                                               **scenario.params)
            elif scenario.suite == "johnprop":
                report = self.check_johnprop_conditions(self._evolution_for(scenario))
            elif scenario.suite == "nonslit":
                report = self.check_nonslit_conditions(self._evolution_for(scenario))
            elif scenario.suite == "subinv":
                report = self.run_subinvariance_experiment(scenario.build_curve(),
                                                           (0.0, 0.25, 0.5))
            else:
                unknown = set(scenario.params) - BROWNIAN_PARAMS
                if unknown:
                    raise InvalidArgumentError(
                        f"unknown brownian parameters: {', '.join(sorted(unknown))}")
                report = self.run_brownian(T=scenario.T, seed=scenario.seed, name=scenario.name,
                                           **scenario.params)
        except LoewnerLabError as err:
            report = Report.from_rows(scenario.name, scenario.suite,
                                      [_row("scenario_error", False, -np.inf, error=str(err))])
        report.name = scenario.name
        return report

    def scenarios(self, suite: Optional[str] = None) -> List[Scenario]:
        """Configured scenarios, optionally restricted to a suite."""
        seed = int(self.config.get("seed", 42))
        resolution = int(self.cfg.get("slit_resolutions", [400])[0])
        items = [Scenario.from_dict(s, seed, resolution) for s in self.cfg.get("scenarios", [])]
        return [s for s in items if suite is None or s.suite == suite]

    def run_suite(self, suite: Optional[str] = None) -> List[Report]:
        """Run the configured scenarios in parallel; reports are ordered by name."""
        scenarios = self.scenarios(suite)
        self.log(f"running {len(scenarios)} scenario(s) with n_jobs={self.n_jobs}")
        reports = Parallel(n_jobs=self.n_jobs)(delayed(self.run_scenario)(s) for s in scenarios)
        return sorted(reports, key=lambda r: r.name)

    def write_reports(self, reports: Sequence[Report], out_dir: str, svg: bool = False) -> pd.DataFrame:
        """
        Write one ``<name>.json`` report per scenario and ``summary.csv``.

        With ``svg`` the slit reports also get an ω(δ) plot.

        Returns:
            pd.DataFrame: The summary (scenario, suite, passed, constants).
        """
        from .utils.io_utils import open_path, write_report

        out_dir = str(out_dir).rstrip("/")
        summary = []
        for report in reports:
            write_report(report.rows, f"{out_dir}/{report.name}.json")
            scalars = {k: v for k, v in report.constants.items()
                       if isinstance(v, (int, float, bool, np.floating, np.integer))}
            summary.append({"scenario": report.name, "suite": report.suite,
                            "passed": report.passed, **scalars})
            if svg and "omega" in report.constants:
                from .visualization import LoewnerVisualization

                table = pd.DataFrame(report.constants["omega"])
                LoewnerVisualization().plot_modulus_of_continuity(
                    table, C_hat=report.constants.get("C_hat"),
                    title=report.name, save_path=f"{out_dir}/{report.name}.svg")
        frame = pd.DataFrame(summary)
        with open_path(f"{out_dir}/summary.csv", "w") as fh:
            frame.to_csv(fh, index=False)
        self.log(f"wrote {len(summary)} report(s) to {out_dir}")
        return frame
