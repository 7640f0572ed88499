"""
Experiment runner

Runs one subcommand against a validated config: builds the environment path,
the density cocycle and the observables on demand, calls the library, writes
CSV/JSON outputs through ResultWriter and records them in the run manifest
together with one summary row per fitted quantity.
"""

import logging
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from ...errors import AcceptanceError, CapabilityError, ConfigurationError, DegenerateCltError
from ..coupling import (
    CouplingConfig,
    build_tails,
    compound_geometric_tail,
    contraction_check,
    coupling_structure,
    dkw_epsilon,
    exact_coupling_tail,
    induced_constants,
    measure_tail,
    regularity_check,
    simulate_coupling_time,
)
from ..env import (
    EnvironmentPath,
    b0_of,
    derive_seed,
    fit_mixing_rate,
    make_rng,
    mixing_profile,
    n_eps,
    n_eps_survey,
    sample_path,
)
from ..lsv import build_return_structure, orbit, return_times
from ..stats import (
    annealed_variance,
    clt_diagnostic,
    correlation,
    dominance_margin,
    fit_exponent,
    make_observable,
    martingale_orthogonality_check,
    memory_loss_curves,
    moment_growth,
    predictions,
    sample_from_density,
    telescoping_residual,
    variance_curve,
)
from ..stats.theory import Prediction, clt_exponent, concentration_bound
from ..transfer import (
    DensityCocycle,
    DensityVector,
    Grid,
    UlamFamily,
    cone_report,
    tv_distance_curve,
)
from .manifest import FitSummary, RunManifest
from .reader import ExperimentConfig
from .writer import ResultWriter

logger = logging.getLogger(__name__)

OUTPUT_DIR_VARIABLE = "LSVRAND_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "out/"

# seed derivation keys
PATH_KEY = 1
ORBIT_KEY = 2
MC_KEY = 3
COUPLING_KEY = 4
ANNEALED_KEY = 5
RETURNS_KEY = 6
SURVEY_KEY = 7

DUALITY_SIGMAS = 4.0
MIXING_N_MAX = 50
SURVEY_PATHS = 20


def resolve_output_dir(
    config: Optional[ExperimentConfig] = None, override: Optional[str] = None
) -> str:
    """--out, then the config, then LSVRAND_OUTPUT_DIR, then out/."""
    return (
        override
        or (config.output_dir if config is not None else None)
        or os.environ.get(OUTPUT_DIR_VARIABLE)
        or DEFAULT_OUTPUT_DIR
    )


@dataclass
class Diagnostic:
    level: str
    message: str


@dataclass
class CommandResult:
    """Files and fits produced by one subcommand."""

    command: str
    paths: List[str] = field(default_factory=list)
    fits: List[FitSummary] = field(default_factory=list)

    @property
    def failed(self) -> List[FitSummary]:
        return [fit for fit in self.fits if fit.passed is False]


def validate_config(config: ExperimentConfig) -> List[Diagnostic]:
    """Consistency diagnostics beyond the schema.

    Raises:
        ConfigurationError: The law is invalid or b0 = 0 for the configured γ
    """
    law = config.build_law()
    diagnostics: List[Diagnostic] = []
    b0 = b0_of(law, config.gamma)
    if b0 == 0.0:
        raise ConfigurationError(
            f"b0 = P(beta <= gamma) = 0 for gamma={config.gamma}: "
            "every atom of the law lies above gamma"
        )
    diagnostics.append(Diagnostic("info", f"b0 = {b0:.6g}"))
    if config.gamma >= law.esssup():
        diagnostics.append(
            Diagnostic(
                "warning",
                f"gamma={config.gamma} >= esssup beta={law.esssup():.6g}; rates are not sharp",
            )
        )
    prediction = predictions(config.gamma)
    diagnostics.append(
        Diagnostic(
            "info",
            f"predicted memory-loss exponent 1/gamma-1 = {-prediction.values['decay']:.6g}",
        )
    )
    asip = prediction.get("asip_q")
    if asip is not None:
        diagnostics.append(
            Diagnostic("info", f"invariance principle needs mixing rate q > {asip:.6g}")
        )
    for warning in prediction.warnings:
        diagnostics.append(Diagnostic("warning", warning))
    if config.decay.j_max > config.law.n_future:
        diagnostics.append(Diagnostic("warning", "decay.j_max exceeds the sampled path length"))
    return diagnostics


class ExperimentRunner:
    """Executes subcommands for one experiment config."""

    def __init__(
        self,
        config: ExperimentConfig,
        config_hash: str,
        config_path: str = "",
        output_dir: Optional[str] = None,
        seed: Optional[int] = None,
        threads: int = 1,
        check: bool = False,
    ):
        """Initialize experiment runner.

        Args:
            config: Validated experiment config
            config_hash: Blob hash of the raw config file
            config_path: Path of the config file, recorded in the manifest
            output_dir: Overrides the configured output directory
            seed: Overrides mc.seed
            threads: Worker threads for sampling and replica loops
            check: Raise AcceptanceError when a fit fails its check
        """
        self.config = config
        self.config_hash = config_hash
        self.config_path = config_path
        self.output_dir = resolve_output_dir(config, output_dir)
        self.seed = config.mc.seed if seed is None else seed
        self.threads = max(1, threads)
        self.check = check
        self.commands: Dict[str, Callable[[ResultWriter], CommandResult]] = {
            "env-sample": self.env_sample,
            "orbit": self.orbit,
            "return-tails": self.return_tails,
            "ulam": self.ulam,
            "density": self.density,
            "decay": self.decay,
            "corr": self.corr,
            "variance": self.variance,
            "clt": self.clt,
            "moments": self.moments,
            "martingale-check": self.martingale_check,
            "coupling": self.coupling,
            "annealed": self.annealed,
        }

    # shared state

    @cached_property
    def law(self):
        return self.config.build_law()

    @cached_property
    def grid(self) -> Grid:
        return self.config.build_grid()

    @cached_property
    def family(self) -> UlamFamily:
        return UlamFamily(self.grid, cache_dir=self.config.grid.cache_dir)

    @cached_property
    def path(self) -> EnvironmentPath:
        return self.replica_path(0)

    def replica_path(self, k: int) -> EnvironmentPath:
        seed = derive_seed(self.seed, PATH_KEY) if k == 0 else derive_seed(self.seed, PATH_KEY, k)
        return sample_path(self.law, self.config.n_pull, self.config.law.n_future, seed)

    @cached_property
    def cocycle(self) -> DensityCocycle:
        return DensityCocycle(self.path, self.grid, n_pull=self.config.n_pull, family=self.family)

    @cached_property
    def prediction(self) -> Prediction:
        return predictions(self.config.gamma)

    @property
    def phi(self):
        return self.config.build_observable()

    @property
    def psi(self):
        return self.config.build_observable2()

    def _fit(
        self,
        name: str,
        command: str,
        value: Optional[float],
        predicted: Optional[float] = None,
    ) -> FitSummary:
        rule = self.config.checks.get(name)
        passed = rule.passes(value, predicted) if rule is not None else None
        tolerance = rule.tolerance if rule is not None else None
        if rule is not None and rule.expected is not None:
            predicted = rule.expected
        return FitSummary(
            name=name,
            value=None if value is None else float(value),
            predicted=predicted,
            tolerance=tolerance,
            passed=passed,
            command=command,
        )

    # driver

    def run(self, command: str) -> CommandResult:
        """Run one subcommand, write its outputs and update the manifest.

        Raises:
            ConfigurationError: Unknown command
            AcceptanceError: check=True and a fit failed
        """
        if command not in self.commands:
            raise ConfigurationError(f"unknown command '{command}'")
        print(f"\n--- Starting {command} ---\n")
        started = datetime.now(timezone.utc).isoformat(timespec="seconds")
        writer = ResultWriter(self.output_dir, subdir=command)
        result = self.commands[command](writer)
        result.paths = list(writer.written)

        manifest = RunManifest.open(self.output_dir, self.config_hash, self.config_path)
        manifest.record(command, started, self.output_dir, result.paths, self.seed, self.threads)
        for fit in result.fits:
            manifest.add_fit(fit)
        manifest.save(self.output_dir)

        for fit in result.fits:
            flag = {True: "pass", False: "FAIL", None: "-"}[fit.passed]
            predicted = "-" if fit.predicted is None else f"{fit.predicted:.6g}"
            value = "-" if fit.value is None else f"{fit.value:.6g}"
            print(f"  {fit.name:<24} value={value:<14} predicted={predicted:<12} {flag}")
        print(f"\n--- {command} complete: {len(result.paths)} files in {writer.target_dir} ---\n")
        if self.check and result.failed:
            names = ", ".join(fit.name for fit in result.failed)
            raise AcceptanceError(f"{command}: acceptance check failed for {names}")
        return result

    # subcommands

    def env_sample(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("env-sample")
        config = self.config
        writer.write_frame("path", self.path.to_frame())
        b0 = b0_of(self.law, config.gamma)
        horizon = min(config.n_pull, config.law.n_future)
        summary = {
            "law": self.law.describe(),
            "b0": b0,
            "esssup": self.law.esssup(),
            "survey_exponent": self.prediction.get("survey"),
        }
        if b0 > 0.0:
            value, saturated = n_eps(self.path, config.gamma, b0, config.epsilon, horizon)
            summary.update({"n_eps": value, "saturated": saturated, "horizon": horizon})
            survey = n_eps_survey(
                self.law,
                config.gamma,
                config.epsilon,
                horizon,
                SURVEY_PATHS,
                derive_seed(self.seed, SURVEY_KEY),
            )
            writer.write_frame("n_eps_survey", survey)
            result.fits.append(self._fit("n_eps", "env-sample", float(value)))
        try:
            profile = mixing_profile(self.law, MIXING_N_MAX)
        except CapabilityError as exc:
            logger.info("No mixing profile: %s", exc)
        else:
            n = np.arange(1, len(profile.values) + 1)
            writer.write_frame("mixing", pd.DataFrame({"n": n, "alpha": profile.values}))
            q, iota = fit_mixing_rate(profile)
            summary.update({"mixing_q": q, "mixing_iota": iota, "provenance": profile.provenance})
            asip = self.prediction.get("asip_q")
            if asip is not None:
                summary["asip_q_min"] = asip
                summary["asip_satisfied"] = bool(q > asip)
        writer.write_json("summary", summary)
        return result

    def orbit(self, writer: ResultWriter) -> CommandResult:
        n = self.config.series.ns[-1]
        rng = make_rng(self.seed, ORBIT_KEY)
        x0 = float(sample_from_density(self.cocycle.density(0), 1, rng)[0])
        points = orbit(self.path, x0, n)
        frame = pd.DataFrame(
            {"t": np.arange(n + 1), "beta": self.path.window(0, n + 1), "x": points}
        )
        writer.write_frame("orbit", frame)
        return CommandResult("orbit")

    def return_tails(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("return-tails")
        section = self.config.returns
        structure = build_return_structure(
            self.path, depth=section.depth, t_min=0, t_max=section.t_max
        )
        writer.write_frame("structure", structure.to_frame())
        n = np.arange(1, structure.depth + 1)
        tails = structure.tails(0)[1:]
        fit = fit_exponent(n, tails, n_lo=section.fit_lo, n_hi=section.fit_hi)
        predicted = self.prediction.get("return_tails")
        result.fits.append(self._fit("return_tails", "return-tails", fit.slope, predicted))
        payload = {"fit": fit.to_dict(), "truncated": structure.truncated}

        if section.mc_samples > 0:
            rng = make_rng(self.seed, RETURNS_KEY)
            starts = 0.5 + 0.5 * rng.random(section.mc_samples)
            times, capped = return_times(self.path, starts, cap=structure.depth)
            resolved = np.where(capped, structure.depth + 1, times)
            p_hat = np.array([(resolved >= k).mean() for k in n])
            stderr = np.sqrt(p_hat * (1.0 - p_hat) / starts.size)
            z = np.abs(p_hat - tails) / np.maximum(stderr, 1e-300)
            agree = (np.abs(p_hat - tails) <= DUALITY_SIGMAS * stderr) | (p_hat == tails)
            writer.write_frame(
                "monte_carlo",
                pd.DataFrame(
                    {"n": n, "exact": tails, "p_hat": p_hat, "stderr": stderr, "agree": agree}
                ),
            )
            worst = float(np.max(np.where(stderr > 0, z, 0.0)))
            result.fits.append(self._fit("return_tails_mc", "return-tails", worst))

        density = self.cocycle.density(0)
        curve = measure_tail(density, structure, 0, structure.depth)
        writer.write_frame("measure_tail", curve.to_frame())
        try:
            tail_fit = curve.fit(n_lo=section.fit_lo, n_hi=section.fit_hi)
        except ConfigurationError:
            tail_fit = None
        if tail_fit is not None:
            payload["measure_tail_fit"] = tail_fit.to_dict()
            result.fits.append(
                self._fit(
                    "measure_tail",
                    "return-tails",
                    tail_fit.slope,
                    self.prediction.get("measure_tail"),
                )
            )
        writer.write_json("fit", payload)
        return result

    def ulam(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("ulam")
        matrix = self.cocycle.matrix(0)
        writer.write_frame("matrix", matrix.to_frame())
        defect = matrix.row_sum_defect()
        writer.write_json(
            "summary",
            {"beta": matrix.beta, "grid": self.grid.descriptor, "row_sum_defect": defect},
        )
        result.fits.append(self._fit("row_sum_defect", "ulam", defect))
        return result

    def density(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("density")
        estimate = self.cocycle.estimate(0)
        writer.write_frame("density", estimate.density.to_frame())
        values = estimate.density.values
        deviation = float(np.max(np.abs(values - 1.0)))
        payload = {
            "n_pull": estimate.n_pull,
            "l1_defect": estimate.l1_defect,
            "max_deviation_from_uniform": deviation,
            "cone": cone_report(estimate.density, self.path.beta(0)),
        }
        writer.write_json("summary", payload)
        result.fits.append(self._fit("density_defect", "density", estimate.l1_defect))
        result.fits.append(self._fit("density_uniform", "density", deviation))
        return result

    def decay(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("decay")
        section = self.config.decay
        g1 = self.phi
        g2 = self.psi
        curves = memory_loss_curves(
            self.cocycle, section.s, section.i, section.j_max, g1, g2, section.norms
        )
        fits = {}
        for norm, curve in curves.items():
            name = f"decay_L{norm:g}"
            writer.write_frame(name, curve.to_frame())
            predicted = -(1.0 / self.config.gamma - 1.0) / norm
            try:
                fit = curve.fit(n_lo=section.fit_lo, n_hi=section.fit_hi)
            except ConfigurationError as exc:
                # exact-zero curves (doubling map) leave nothing to fit
                logger.warning("No %s fit: %s", name, exc)
                fits[name] = None
                result.fits.append(self._fit(name, "decay", None, predicted))
                continue
            fits[name] = fit.to_dict()
            result.fits.append(self._fit(name, "decay", fit.slope, predicted))
        writer.write_json("fits", fits)

        # Lebesgue against the sample measure at shift s
        n, distance = tv_distance_curve(
            self.cocycle,
            DensityVector.uniform(self.grid),
            self.cocycle.density(section.s),
            section.s,
            section.j_max - section.s,
        )
        writer.write_frame("tv", pd.DataFrame({"n": n, "distance": distance}))

        if section.reference_beta is not None:
            norm = section.norms[0]
            reference = memory_loss_curves(
                self._constant_cocycle(section.reference_beta),
                section.s,
                section.i,
                section.j_max,
                g1,
                g2,
                (norm,),
            )[norm]
            curve = curves[norm]
            writer.write_frame(
                "dominance",
                pd.DataFrame({"n": curve.n, "random": curve.value, "reference": reference.value}),
            )
            margin = dominance_margin(curve, reference, section.dominance_from)
            result.fits.append(self._fit("dominance", "decay", margin))

        if section.mc_check:
            frame, worst = self._duality_table(section.i, section.mc_check, g1, g2)
            writer.write_frame("duality", frame)
            result.fits.append(self._fit("duality", "decay", worst))
        return result

    def _constant_cocycle(self, beta: float) -> DensityCocycle:
        """Cocycle on the same grid and window as the sampled path, with every fiber at beta."""
        path = EnvironmentPath.from_sequence(
            np.full(self.path.betas.size, beta), n_past=self.path.n_past
        )
        return DensityCocycle(path, self.grid, n_pull=self.config.n_pull, family=self.family)

    def _duality_table(self, t: int, ns: List[int], phi, psi):
        rows = []
        for k, n in enumerate(ns):
            exact = correlation(self.cocycle, t, phi, psi, n, method="operator")
            sampled = correlation(
                self.cocycle,
                t,
                phi,
                psi,
                n,
                method="monte-carlo",
                n_samples=self.config.mc.n_samples,
                seed=derive_seed(self.seed, MC_KEY, k),
                threads=self.threads,
            )
            z = abs(exact.value - sampled.value) / sampled.stderr if sampled.stderr > 0 else 0.0
            rows.append(
                {
                    "n": n,
                    "operator": exact.value,
                    "monte_carlo": sampled.value,
                    "stderr": sampled.stderr,
                    "agree": exact.agrees_with(sampled, n_sigma=DUALITY_SIGMAS),
                    "z": z,
                }
            )
        frame = pd.DataFrame(rows)
        return frame, float(frame["z"].max()) if rows else 0.0

    def corr(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("corr")
        ns = list(range(self.config.series.corr_n_max + 1))
        frame, worst = self._duality_table(0, ns, self.phi, self.psi)
        writer.write_frame("correlations", frame)
        result.fits.append(self._fit("duality", "corr", worst))
        return result

    def variance(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("variance")
        series = self.config.series
        phi = self.phi
        for method in series.methods:
            curve = variance_curve(
                self.cocycle,
                phi,
                series.ns,
                method=method,
                n_samples=self.config.mc.n_samples,
                seed=derive_seed(self.seed, MC_KEY),
                threads=self.threads,
            )
            writer.write_frame(f"variance_{method}", curve.to_frame())
            result.fits.append(self._fit(f"variance_{method}", "variance", curve.value[-1]))

        if series.n_paths > 1 or len(series.ns) > 1:
            rows = []
            for k in range(series.n_paths):
                path = self.path if k == 0 else self.replica_path(k)
                cocycle = DensityCocycle(
                    path, self.grid, n_pull=self.config.n_pull, family=self.family
                )
                curve = variance_curve(cocycle, phi, [series.ns[0], series.ns[-1]])
                first, last = curve.value
                change = abs(last - first) / last if last > 0 else float("inf")
                rows.append({"path": k, "first": first, "last": last, "relative_change": change})
            frame = pd.DataFrame(rows)
            writer.write_frame("linearity", frame)
            result.fits.append(
                self._fit("variance_linearity", "variance", float(frame["relative_change"].max()))
            )
        return result

    def _clt_enabled(self) -> bool:
        if self.prediction.warnings:
            for warning in self.prediction.warnings:
                print(f"  warning: {warning}")
            return False
        return True

    def clt(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("clt")
        if not self._clt_enabled():
            return result
        series = self.config.series
        try:
            report = clt_diagnostic(
                self.cocycle,
                self.phi,
                series.ns,
                self.config.mc.n_samples,
                derive_seed(self.seed, MC_KEY),
                threads=self.threads,
                predicted_exponent=self.prediction.get("clt"),
            )
        except DegenerateCltError:
            writer.write_json("summary", {"degenerate": True})
            raise
        frame = report.distances.to_frame()
        frame["sigma2"] = report.sigma2
        writer.write_frame("kolmogorov", frame)
        payload = {
            "fit": None if report.fit is None else report.fit.to_dict(),
            "predicted_exponent": report.predicted_exponent,
            "general_exponent": clt_exponent(self.config.moment_order),
        }
        writer.write_json("fit", payload)
        result.fits.append(self._fit("clt_distance", "clt", float(report.distances.value[-1])))
        if report.fit is not None:
            result.fits.append(
                self._fit("clt_rate", "clt", report.fit.slope, report.predicted_exponent)
            )
        return result

    def moments(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("moments")
        series = self.config.series
        report = moment_growth(
            self.cocycle,
            self.phi,
            self.config.moment_order,
            series.ns,
            self.config.mc.n_samples,
            derive_seed(self.seed, MC_KEY),
            threads=self.threads,
            predicted_exponent=self.prediction.get("moments"),
        )
        writer.write_frame("moments", report.curve.to_frame())
        writer.write_json("fit", {"fit": None if report.fit is None else report.fit.to_dict()})
        writer.write_frame("concentration", self._concentration_table(report))
        if report.fit is not None:
            result.fits.append(
                self._fit("moments", "moments", report.fit.slope, report.predicted_exponent)
            )
        return result

    def _concentration_table(self, report) -> pd.DataFrame:
        """Markov bound on P(|S_n| >= t n) with K fitted from the measured norms."""
        prediction = self.prediction
        growth = prediction.get("moments")
        n = report.curve.n
        k_const = float(np.max(report.curve.value / n.astype(float) ** growth))
        t = self.config.series.concentration_t
        bounds = [
            concentration_bound(t, int(m), k_const, report.order, prediction.p, prediction.r)
            for m in n
        ]
        return pd.DataFrame({"n": n, "t": t, "k_const": k_const, "bound": bounds})

    def martingale_check(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("martingale-check")
        series = self.config.series
        tests = [make_observable(name) for name in series.test_functions]
        rows = []
        for factor in (1, 2):
            grid = Grid.from_kind(
                self.config.grid.kind, self.grid.n_cells * factor, self.config.grid.refine
            )
            cocycle = (
                self.cocycle
                if factor == 1
                else DensityCocycle(self.path, grid, n_pull=self.config.n_pull)
            )
            defect = martingale_orthogonality_check(cocycle, self.phi, series.martingale_n, tests)
            residual = max(
                telescoping_residual(cocycle, self.phi, series.martingale_n, f) for f in tests
            )
            rows.append({"n_cells": grid.n_cells, "defect": defect, "telescoping": residual})
        frame = pd.DataFrame(rows)
        writer.write_frame("defects", frame)
        coarse, fine = frame["defect"].iloc[0], frame["defect"].iloc[1]
        ratio = coarse / fine if fine > 0 else float("inf")
        result.fits.append(self._fit("martingale_defect", "martingale-check", float(coarse)))
        result.fits.append(self._fit("martingale_ratio", "martingale-check", ratio))
        return result

    def coupling(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("coupling")
        section = self.config.coupling
        constants = induced_constants(self.path, depth=section.depth, k2=section.k2)
        contraction = contraction_check(
            self.path, constants, section.n_densities, derive_seed(self.seed, COUPLING_KEY, 0)
        )
        regularity = regularity_check(
            self.cocycle.density(0), self.path, 0, section.depth, constants.k1
        )
        config = CouplingConfig(
            theta=section.theta,
            c_u=section.c_u if section.c_u is not None else constants.c_u,
            first_tail=section.first_tail,
            conditional=section.conditional,
            rho=section.rho,
            horizon=section.horizon,
            n_samples=section.n_samples,
            seed=derive_seed(self.seed, COUPLING_KEY, 1),
            block_size=self.config.mc.block_size,
        )
        structure = None
        if config.needs_structure:
            structure = coupling_structure(self.path, config.horizon)
        sample = simulate_coupling_time(
            config, structure=structure, threads=self.threads, fit_lo=section.fit_lo
        )
        frame = sample.to_frame()

        first, conditional = build_tails(config, structure)
        if section.first_tail == "geometric" and section.conditional == "geometric":
            reference = compound_geometric_tail(config.theta, config.rho, sample.n)
        else:
            reference = exact_coupling_tail(first, conditional, config.theta, config.horizon)
        frame["reference"] = reference
        writer.write_frame("tail", frame)
        deviation = float(np.max(np.abs(sample.p_hat - reference)))
        band = dkw_epsilon(config.n_samples)

        writer.write_json(
            "summary",
            {
                "constants": constants.to_dict(),
                "contraction": {
                    "n_densities": contraction.n_densities,
                    "n_checks": contraction.n_checks,
                    "violations": contraction.violations,
                    "worst_margin": contraction.worst_margin,
                },
                "regularity": {
                    "passed": regularity.passed,
                    "worst_ell": regularity.worst[0],
                    "worst_value": regularity.worst[1],
                    "threshold": regularity.threshold,
                },
                "dkw_epsilon": band,
                "max_deviation": deviation,
                "censored_frac": sample.censored_frac,
                "fit": None if sample.fit is None else sample.fit.to_dict(),
            },
        )
        result.fits.append(
            self._fit("contraction_violations", "coupling", float(len(contraction.violations)))
        )
        result.fits.append(self._fit("coupling_band", "coupling", deviation, band))
        if sample.fit is not None:
            result.fits.append(
                self._fit("coupling", "coupling", sample.fit.slope, self.prediction.get("coupling"))
            )
        return result

    def annealed(self, writer: ResultWriter) -> CommandResult:
        result = CommandResult("annealed")
        section = self.config.annealed
        estimate = annealed_variance(
            self.law,
            self.phi,
            section.n_max,
            section.n_paths,
            section.n_samples,
            derive_seed(self.seed, ANNEALED_KEY),
            self.grid,
            self.config.n_pull,
            method=section.method,
            threads=self.threads,
            fit_lo=section.fit_lo,
        )
        writer.write_frame("correlations", estimate.correlations.to_frame())
        writer.write_json(
            "summary",
            {
                "sigma2": estimate.value,
                "stderr": estimate.stderr,
                "truncation_error": estimate.truncation_error,
                "summable": estimate.summable,
                "fit": None if estimate.fit is None else estimate.fit.to_dict(),
            },
        )
        if not estimate.summable:
            print("  warning: fitted correlation decay is not summable; no variance reported")
        result.fits.append(self._fit("annealed_variance", "annealed", estimate.value))
        return result
