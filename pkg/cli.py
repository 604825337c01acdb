#!/usr/bin/env python3
"""
Demand Value CLI

Values spatio-temporal demand datasets by their contribution to forecast
accuracy and benchmarks the Shapley approximators used to do so.
"""

import argparse
import sys
import uuid
from datetime import timedelta
from pathlib import Path
from typing import Any, NoReturn

import pandas as pd

from demandvalue import __version__
from demandvalue.approx.estimators import approximate
from demandvalue.bench.approximators import evaluate_approximator, truncation_sweep
from demandvalue.bench.cooperation import STATUS_INSUFFICIENT, STATUS_NO_DEMAND, cooperation_benefit
from demandvalue.bench.metric_compare import metric_cross_validation
from demandvalue.bench.retail import accuracy_probability_curve, pims_select
from demandvalue.bench.synthetic import synthetic_panels
from demandvalue.config import Settings, get_settings
from demandvalue.config_loader import ConfigLoader
from demandvalue.core.grid import TimeGrid
from demandvalue.core.series import DemandPanel
from demandvalue.errors import ConfigError, DataError, DemandValueError, InfeasibleError
from demandvalue.forecast.forecasters import get_forecaster
from demandvalue.forecast.metrics import get_metric
from demandvalue.infra.logging import (
    clear_run_context,
    get_logger,
    set_run_context,
    setup_logging,
)
from demandvalue.infra.outputs import to_json_text, write_csv, write_json
from demandvalue.ingest.binning import (
    build_panel,
    build_zone_panels,
    panel_summary,
    split_windows,
)
from demandvalue.ingest.loader import LoadReport, load_trips
from demandvalue.schemas import TRUNCATED_ALGORITHMS, RunConfig
from demandvalue.valuation.game import ForecastValueGame
from demandvalue.valuation.report import build_value_report
from demandvalue.valuation.shapley import exact_shapley, leave_one_out

COMMANDS = (
    "ingest-report",
    "value",
    "coop",
    "bench-approx",
    "bench-truncation",
    "retail-curve",
    "pims",
    "metric-compare",
)

# Execution settings that never change results stay out of manifests
MANIFEST_EXCLUDE = ("workers", "out")


class DemandValueCLI:
    """Runs one command of a resolved run configuration."""

    def __init__(self, config: RunConfig, settings: Settings | None = None):
        """Initialize the CLI."""
        self.config = config
        self.settings = settings or get_settings()
        self.out_dir = Path(config.out)
        self.outputs: list[str] = []
        self.load_report: LoadReport | None = None
        self.logger = get_logger(__name__)

        # Command routing
        self.commands = {
            "ingest-report": self._ingest_report,
            "value": self._value,
            "coop": self._coop,
            "bench-approx": self._bench_approx,
            "bench-truncation": self._bench_truncation,
            "retail-curve": self._retail_curve,
            "pims": self._pims,
            "metric-compare": self._metric_compare,
        }

    def run(self, command: str) -> dict[str, Any]:
        """Execute ``command`` and write its manifest.

        Returns:
            The manifest document
        """
        if command not in self.commands:
            raise ConfigError(f"Unknown command: {command}", {"available": list(COMMANDS)})

        self.logger.info(f"Running {command}")
        summary = self.commands[command]()
        manifest = self._manifest(command, summary)
        self._write_json(manifest, "manifest.json")
        return manifest

    # ------------------------------------------------------------------
    # Inputs

    def _panels(self) -> dict[str, DemandPanel]:
        config = self.config
        if not config.input:
            raise ConfigError("--input is required")

        if config.schema_name == "synthetic":
            panels = synthetic_panels(config.input, seed=config.data_seed)
            if config.zone is not None:
                if config.zone not in panels:
                    raise ConfigError(
                        f"Zone {config.zone} not in synthetic panel {config.input}",
                        {"zones": sorted(panels)},
                    )
                panels = {config.zone: panels[config.zone]}
            return panels

        if config.date_from is None or config.date_to is None:
            raise ConfigError("--from and --to are required for trip files")

        trips = load_trips(
            config.input,
            config.schema_name,
            (config.date_from, config.date_to),
            source_column=config.source_column,
        )
        self.load_report = trips.report

        grid = TimeGrid.spanning(
            config.date_from, config.date_to, bin_width=timedelta(hours=config.bin_hours)
        )
        if config.control_start is not None:
            grid = split_windows(grid, config.control_start)

        if config.per_zone:
            return build_zone_panels(trips, grid, top_k=config.top_k)
        panel = build_panel(trips, grid, zone=config.zone, top_k=config.top_k)
        return {panel.zone: panel}

    def _single_panel(self) -> DemandPanel:
        panels = self._panels()
        if len(panels) != 1:
            raise ConfigError(
                "This command values one panel; select a zone with --zone",
                {"zones": sorted(panels)},
            )
        panel = next(iter(panels.values()))
        if not panel.grid.is_split:
            raise ConfigError("--control-start is required to value a panel")
        return panel

    def _game(self, panel: DemandPanel, metric: str | None = None) -> ForecastValueGame:
        return ForecastValueGame(
            panel,
            get_forecaster(self.config.forecaster),
            get_metric(metric or self.config.metric, self.config.normalization),
            progress_every=self.settings.progress_every,
        )

    def _require_seed(self) -> int:
        if self.config.seed is None:
            raise ConfigError("--seed is required for this command")
        return self.config.seed

    # ------------------------------------------------------------------
    # Outputs

    def _write_csv(self, frame: pd.DataFrame, name: str) -> None:
        write_csv(frame, self.out_dir / name)
        self.outputs.append(name)

    def _write_json(self, payload: Any, name: str) -> None:
        write_json(payload, self.out_dir / name)
        if name != "manifest.json":
            self.outputs.append(name)

    def _manifest(self, command: str, summary: dict[str, Any]) -> dict[str, Any]:
        config = {
            key: value
            for key, value in self.config.to_manifest().items()
            if key not in MANIFEST_EXCLUDE
        }
        return {
            "command": command,
            "version": __version__,
            "config": config,
            "outputs": sorted(self.outputs),
            "summary": summary,
        }

    # ------------------------------------------------------------------
    # Commands

    def _ingest_report(self) -> dict[str, Any]:
        panels = self._panels()
        frames = [panel_summary(panel) for panel in panels.values()]
        summary = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()
        self._write_csv(summary, "panel_summary.csv")
        if self.load_report is not None:
            self._write_json(self.load_report.to_dict(), "load_report.json")
        return {
            "zones": len(panels),
            "rides": float(summary["rides"].sum()) if not summary.empty else 0.0,
            "load_report": self.load_report.to_dict() if self.load_report else None,
        }

    def _value(self) -> dict[str, Any]:
        panel = self._single_panel()
        spec = self.config.algorithm_spec()
        game = self._game(panel)

        result = approximate(
            game, spec, workers=self.config.workers, exact_limit=self.settings.exact_limit
        )
        loo = leave_one_out(game)
        report = build_value_report(
            panel,
            shapley=result.phi,
            loo=loo,
            v_full=game.grand_value(),
            tte=result.tte,
            metric=self.config.metric,
            forecaster=self.config.forecaster,
            algorithm=spec.name,
            permutations_used=result.permutations_used,
            truncation_skips=result.truncation_skips,
            **spec.params(),
        )
        self._write_csv(report.to_frame(), "value_report.csv")
        self._write_json(report.model_dump(mode="json"), "value_report.json")
        return {
            "zone": report.zone,
            "v_full": report.v_full,
            "tte": report.tte,
            "shapley_sum": float(result.phi.sum()),
        }

    def _coop(self) -> dict[str, Any]:
        analyses = cooperation_benefit(
            self._panels(),
            self.config.thresholds,
            forecaster=self.config.forecaster,
            metric=self.config.metric,
            accuracy_floor=self.config.accuracy_floor,
            normalization=self.config.normalization,
        )
        rows = [row for analysis in analyses for row in analysis.to_rows()]
        self._write_csv(pd.DataFrame(rows), "cooperation.csv")
        return {
            "zones": len(analyses),
            STATUS_INSUFFICIENT: sum(a.status == STATUS_INSUFFICIENT for a in analyses),
            STATUS_NO_DEMAND: sum(a.status == STATUS_NO_DEMAND for a in analyses),
        }

    def _exact_reference(self, game: ForecastValueGame):
        return exact_shapley(game, exact_limit=self.settings.exact_limit, workers=self.config.workers)

    def _bench_approx(self) -> dict[str, Any]:
        seed = self._require_seed()
        game = self._game(self._single_panel())
        exact_phi = self._exact_reference(game)

        names = self.config.algorithms or [self.config.algo]
        rows = [
            evaluate_approximator(
                game,
                self.config.algorithm_spec(name, seed=seed),
                self.config.reps,
                exact_phi,
                master_seed=seed,
                workers=self.config.workers,
            ).to_row()
            for name in names
        ]
        self._write_csv(pd.DataFrame(rows), "bench_approx.csv")
        return {"algorithms": names, "n_players": game.n_players}

    def _bench_truncation(self) -> dict[str, Any]:
        seed = self._require_seed()
        names = self.config.algorithms or ["tss"]
        untruncated = [name for name in names if name not in TRUNCATED_ALGORITHMS]
        if untruncated:
            raise ConfigError(
                "bench-truncation needs truncated algorithms",
                {"got": untruncated, "available": list(TRUNCATED_ALGORITHMS)},
            )
        game = self._game(self._single_panel())
        exact_phi = self._exact_reference(game)

        rows = []
        for name in names:
            sweep = truncation_sweep(
                game,
                self.config.algorithm_spec(name, seed=seed),
                self.config.taus,
                self.config.reps,
                exact_phi,
                master_seed=seed,
                workers=self.config.workers,
            )
            rows.extend(evaluation.to_row() for evaluation in sweep)
        self._write_csv(pd.DataFrame(rows), "bench_truncation.csv")
        return {"algorithms": names, "taus": self.config.taus}

    def _retail_curve(self) -> dict[str, Any]:
        seed = self._require_seed()
        game = self._game(self._single_panel())
        k_values = self.config.k_values or list(range(1, game.n_players + 1))
        curve = accuracy_probability_curve(
            game, k_values, self.config.samples_per_k, self.config.target_fraction, seed
        )
        self._write_csv(curve, "retail_curve.csv")
        reached = curve[curve["probability"] >= 0.5]["k"]
        return {"k_at_half": int(reached.min()) if not reached.empty else None}

    def _pims(self) -> dict[str, Any]:
        seed = self._require_seed()
        panel = self._single_panel()
        game = self._game(panel)
        target = self.config.target
        if target is None:
            target = self.config.target_fraction * game.grand_value()

        outcome = pims_select(
            game, target, self.config.batch_size, self.config.max_batches, seed
        )
        payload = outcome.to_dict()
        payload["selected_sources"] = [panel.sources[i] for i in outcome.coalition.members]
        self._write_json(payload, "pims.json")

        if self.config.strict and not outcome.success:
            raise InfeasibleError(
                "Accuracy target not reached",
                {"target": target, "value": outcome.value, "batches": outcome.batches_used},
            )
        return {"success": outcome.success, "batches_used": outcome.batches_used}

    def _metric_compare(self) -> dict[str, Any]:
        panel = self._single_panel()
        comparison = metric_cross_validation(
            panel,
            self.config.algorithm_spec(),
            metrics=self.config.metrics,
            forecaster=self.config.forecaster,
            top_k=self.config.top,
            normalization=self.config.normalization,
            workers=self.config.workers,
        )
        self._write_csv(comparison.shares.reset_index(), "metric_shares.csv")
        self._write_csv(comparison.pairs_frame(), "metric_pairs.csv")
        return {"metrics": list(self.config.metrics)}


def _float_list(text: str) -> list[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _int_list(text: str) -> list[int]:
    return [int(item) for item in text.split(",") if item.strip()]


def _str_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


class CLIArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports bad flags as ``ConfigError``."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(f"Invalid arguments: {message}", {"usage": self.format_usage().strip()})


def build_parser() -> CLIArgumentParser:
    """Argument parser; unset flags stay None so config files can fill them."""
    parser = CLIArgumentParser(description="Demand Value CLI")
    parser.add_argument("command", choices=COMMANDS, help="Command to run")
    parser.add_argument("--config", help="YAML/JSON run config or a previous manifest")

    data = parser.add_argument_group("data")
    data.add_argument("--input", help="Trip CSV, or generator name with --schema synthetic")
    data.add_argument("--schema", choices=["generic", "chicago", "nyc", "synthetic"])
    data.add_argument("--from", dest="date_from", help="First accepted start time (ISO 8601)")
    data.add_argument("--to", dest="date_to", help="End of the date range, exclusive")
    data.add_argument("--zone", help="Zone to value (default: city-wide)")
    data.add_argument("--per-zone", action="store_const", const=True, help="One panel per zone")
    data.add_argument("--source-column", choices=["company", "driver"])
    data.add_argument("--top-k", type=int, help="Keep the k busiest sources plus a tail")
    data.add_argument("--bin-hours", type=int)
    data.add_argument("--control-start", help="First timestamp of the control window")
    data.add_argument("--data-seed", type=int, help="Seed of synthetic panels")

    model = parser.add_argument_group("model")
    model.add_argument("--forecaster")
    model.add_argument("--metric")
    model.add_argument("--metrics", type=_str_list, help="Comma-separated metrics for metric-compare")
    model.add_argument("--normalization", choices=["mean", "max", "l2"])

    algo = parser.add_argument_group("algorithm")
    algo.add_argument("--algo", help="exact, mc, tmc, rs, trs, ss, tss")
    algo.add_argument("--algorithms", type=_str_list, help="Comma-separated algorithms to benchmark")
    algo.add_argument("--rounds", type=int)
    algo.add_argument("--tau", type=float)
    algo.add_argument("--taus", type=_float_list, help="Comma-separated truncation thresholds")
    algo.add_argument("--conv-threshold", type=float)
    algo.add_argument("--reps", type=int)
    algo.add_argument("--seed", type=int)
    algo.add_argument("--workers", type=int)

    analysis = parser.add_argument_group("analysis")
    analysis.add_argument("--thresholds", type=_float_list, help="Comma-separated cooperation thresholds")
    analysis.add_argument("--accuracy-floor", type=float)
    analysis.add_argument("--k-values", type=_int_list)
    analysis.add_argument("--samples-per-k", type=int)
    analysis.add_argument("--target-fraction", type=float)
    analysis.add_argument("--target", type=float, help="Absolute PIMS accuracy target")
    analysis.add_argument("--batch-size", type=int)
    analysis.add_argument("--max-batches", type=int)
    analysis.add_argument("--top", type=int, help="Rank agreement depth for metric-compare")
    analysis.add_argument("--strict", action="store_const", const=True, help="Exit 4 when PIMS fails")

    output = parser.add_argument_group("output")
    output.add_argument("--out", help="Output directory")
    output.add_argument("--json", action="store_true", help="Print the manifest to stdout")
    output.add_argument("--debug", action="store_true", help="Enable debug mode")
    return parser


def overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    """Config values given on the command line, keyed as in config files."""
    overrides = {
        "input": args.input,
        "schema": args.schema,
        "from": args.date_from,
        "to": args.date_to,
        "zone": args.zone,
        "per_zone": args.per_zone,
        "source_column": args.source_column,
        "top_k": args.top_k,
        "bin_hours": args.bin_hours,
        "control_start": args.control_start,
        "data_seed": args.data_seed,
        "forecaster": args.forecaster,
        "metric": args.metric,
        "metrics": args.metrics,
        "normalization": args.normalization,
        "algo": args.algo,
        "algorithms": args.algorithms,
        "rounds": args.rounds,
        "tau": args.tau,
        "taus": args.taus,
        "conv_threshold": args.conv_threshold,
        "reps": args.reps,
        "seed": args.seed,
        "workers": args.workers,
        "thresholds": args.thresholds,
        "accuracy_floor": args.accuracy_floor,
        "k_values": args.k_values,
        "samples_per_k": args.samples_per_k,
        "target_fraction": args.target_fraction,
        "target": args.target,
        "batch_size": args.batch_size,
        "max_batches": args.max_batches,
        "top": args.top,
        "strict": args.strict,
        "out": args.out,
    }
    return overrides


def main(argv: list[str] | None = None) -> int:
    """Main CLI function."""
    try:
        args = build_parser().parse_args(argv)
        settings = get_settings()
    except ConfigError as e:
        print(to_json_text(e.to_dict()), file=sys.stderr, end="")
        return e.exit_code

    setup_logging(
        level="DEBUG" if args.debug else settings.log_level,
        format_type=settings.log_format,
        debug=args.debug or settings.debug,
    )
    logger = get_logger(__name__)
    set_run_context(run_id_val=uuid.uuid4().hex, command_val=args.command)

    try:
        config = ConfigLoader().resolve(
            args.config,
            overrides_from_args(args),
            defaults=settings.run_defaults(),
        )
        cli = DemandValueCLI(config, settings)
        manifest = cli.run(args.command)
    except DemandValueError as e:
        logger.error(f"{args.command} failed: {e.message}")
        print(to_json_text(e.to_dict()), file=sys.stderr, end="")
        return e.exit_code
    except Exception as e:
        logger.exception(f"{args.command} failed unexpectedly")
        error = DataError(f"Unexpected error: {e}", {"type": type(e).__name__})
        print(to_json_text(error.to_dict()), file=sys.stderr, end="")
        return error.exit_code
    finally:
        clear_run_context()

    if args.json:
        print(to_json_text(manifest), end="")
    else:
        print(f"{args.command}: wrote {', '.join(manifest['outputs'])} to {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
