# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import time

from gt_multinomial import settings
from gt_multinomial.cli import tables
from gt_multinomial.cli.output import OutputRecord
from gt_multinomial.estimators.config import EmConfig, EstimatorKind
from gt_multinomial.estimators.em import EmAlgorithm
from gt_multinomial.estimators.simplex import nelder_mead_reference
from gt_multinomial.model.types import PoolDesign, ReducedPrevalence, TraitPrevalence
from gt_multinomial.risk.engine import RiskEngine
from gt_multinomial.risk.monte_carlo import MonteCarloRisk
from gt_multinomial.risk.summary import COMPONENTS
from gt_multinomial.utils import EnumerationBudgetError, get_logger, log_message, throw

logger = get_logger("cli")


class Reproducer:
    """
    Builds the reproduction targets. Risk summaries are cached per
    (p, n, k, estimator) so targets sharing a grid compute it once.
    """

    def __init__(self, budget=None, seed=None, samples=None, threads=None):
        self.budget = settings.enumeration_budget if budget is None else budget
        self.seed = settings.monte_carlo_seed if seed is None else seed
        self.samples = settings.monte_carlo_samples if samples is None else samples
        self.threads = threads
        self._summaries = {}

    def metadata(self):
        return {
            "seed": self.seed,
            "samples": self.samples,
            "budget": self.budget,
            "rng_algorithm": settings.rng_algorithm,
        }

    def summary(self, point, n, k, estimator):
        key = (tuple(point), n, k, estimator)
        if key not in self._summaries:
            self._summaries[key] = RiskEngine.auto(
                TraitPrevalence(*point),
                PoolDesign(k=k, n=n),
                estimator,
                threads=self.threads,
                budget=self.budget,
                samples=self.samples,
                seed=self.seed,
            )
        return self._summaries[key]

    def build(self, target):
        """
        OutputRecord for one target
        """
        if target not in tables.TARGETS:
            throw(f"Unknown target {target!r}; choose one of {', '.join(tables.TARGETS + ['all'])}")
        started = time.perf_counter()
        if target == "table1":
            record = self.table1()
        elif target == "table2":
            record = self.table2()
        elif target in tables.APPLICATION_POINTS:
            record = self.application_table(target)
        elif target in tables.COMPONENT_TABLES:
            record = self.component_table(target)
        else:
            record = self.figures()
        record.metadata["seconds"] = round(time.perf_counter() - started, 3)
        log_message(f"{target}: {len(record.rows)} rows in {record.metadata['seconds']} s", "Reproduce")
        return record

    def table1(self):
        record = OutputRecord("table1", metadata=self.metadata())
        for k in tables.BOUNDARY_K:
            for n in tables.BOUNDARY_N:
                design = PoolDesign(k=k, n=n)
                for point in tables.BOUNDARY_POINTS:
                    p = TraitPrevalence(*point)
                    try:
                        value = RiskEngine.boundary_probability(p, design, threads=self.threads, budget=self.budget)
                        method, standard_error = "exact", 0.0
                    except EnumerationBudgetError as error:
                        logger.warning("%s; switching to Monte Carlo", error)
                        value, standard_error = MonteCarloRisk.boundary_probability(p, design, self.samples, self.seed)
                        method = "monte_carlo"
                    record.add({
                        "k": k,
                        "n": n,
                        "p10": point[0],
                        "p01": point[1],
                        "p11": point[2],
                        "boundary_probability": value,
                        "standard_error": standard_error,
                        "method": method,
                    })
        return record

    def table2(self):
        record = OutputRecord("table2", metadata=self.metadata())
        x, design = tables.EM_START_COUNTS, tables.EM_START_DESIGN
        for start in tables.EM_STARTS:
            config = EmConfig.default().with_start(ReducedPrevalence(start[0], start[1]))
            em = EmAlgorithm.mle(x, design, config)
            simplex = nelder_mead_reference(x, design, TraitPrevalence(*start))
            record.add({
                "start10": start[0],
                "start01": start[1],
                "start11": start[2],
                "em10": em.estimate.p10,
                "em01": em.estimate.p01,
                "em11": em.estimate.p11,
                "em_log_likelihood": em.full_log_likelihood,
                "nm10": simplex.estimate.p10,
                "nm01": simplex.estimate.p01,
                "nm11": simplex.estimate.p11,
                "nm_log_likelihood": simplex.full_log_likelihood,
                "nm_converged": simplex.converged,
            })
        return record

    def application_table(self, target):
        point = tables.APPLICATION_POINTS[target]
        record = OutputRecord(target, metadata=self.metadata())
        for n in tables.APPLICATION_N:
            for estimator in EstimatorKind:
                row = {"n": n, "estimator": estimator.value, "metric": "avg_abs_relative_bias"}
                mse = {"n": n, "estimator": estimator.value, "metric": "avg_mse_x1000"}
                for k in tables.APPLICATION_K:
                    summary = self.summary(point, n, k, estimator)
                    row[f"k{k}"] = summary.avg_abs_relative_bias
                    mse[f"k{k}"] = 1000.0 * summary.avg_mse
                record.add(row)
                record.add(mse)
        # bias rows first, then MSE rows, as printed
        record.rows.sort(key=lambda r: r["metric"] != "avg_abs_relative_bias")
        return record

    def component_table(self, target):
        k, metric = tables.COMPONENT_TABLES[target]
        record = OutputRecord(target, metadata={**self.metadata(), "k": k, "metric": metric})
        for n in tables.COMPONENT_N:
            for estimator in EstimatorKind:
                row = {"n": n, "estimator": estimator.value}
                for point in tables.COMPONENT_POINTS:
                    summary = self.summary(point, n, k, estimator)
                    values = summary.relative_bias_percent if metric == "relative_bias" else 1000.0 * summary.mse
                    label = "_".join(f"{value:g}" for value in point)
                    for component, value in zip(COMPONENTS, values):
                        row[f"p{component}@{label}"] = float(value)
                record.add(row)
        return record

    def figures(self):
        """Long-format series: one row per (point, n, k, estimator, component, metric)"""
        record = OutputRecord("figures", metadata=self.metadata())
        series = []
        for point in tables.APPLICATION_POINTS.values():
            for n in tables.APPLICATION_N:
                for k in tables.APPLICATION_K:
                    series.append((point, n, k))
        for point in tables.COMPONENT_POINTS:
            for k in tables.FIGURE_COMPARISON_K:
                series.append((point, tables.FIGURE_COMPARISON_N, k))

        for point, n, k in series:
            for estimator in EstimatorKind:
                summary = self.summary(point, n, k, estimator)
                metrics = {"relative_bias": summary.relative_bias_percent, "mse": summary.mse}
                for metric, values in metrics.items():
                    for component, value in zip(COMPONENTS, values):
                        record.add({
                            "p10": point[0],
                            "p01": point[1],
                            "p11": point[2],
                            "n": n,
                            "k": k,
                            "estimator": estimator.value,
                            "component": f"p{component}",
                            "metric": metric,
                            "value": float(value),
                            "method": summary.method.value,
                        })
        return record


def reproduce(target, out, fmt="csv", precision=None, budget=None, seed=None, samples=None, threads=None):
    """
    Write one target (or every target for "all") under out; returns the
    written data paths
    """
    reproducer = Reproducer(budget=budget, seed=seed, samples=samples, threads=threads)
    targets = tables.TARGETS if target == "all" else [target]
    written = []
    for name in targets:
        record = reproducer.build(name)
        digits = settings.reproduce_precision.get(name, settings.csv_precision) if precision is None else precision
        data_path, _ = record.write(out, fmt, digits)
        written.append(data_path)
    return written
