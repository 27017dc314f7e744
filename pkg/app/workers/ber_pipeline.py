# app/workers/ber_pipeline.py - Batch BER pipeline: simulate -> learn -> infer / validate / report
"""
Run as:  python -m app.workers.ber_pipeline <simulate|learn|infer|validate|report> [options]

Exit codes: 0 success, 1 validation thresholds not met, 2 usage/input error,
3 I/O error while writing, 4 impossible evidence.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from app.config.settings import settings
from app.models.network_models import Cpt
from app.schemas.experiment_schemas import ExperimentConfig
from app.services.bayes_net.file_service import FileService as CptFileService
from app.services.bayes_net.inference_service import BayesNet
from app.services.bayes_net.learning_service import learn_cpt
from app.services.bayes_net.structure_service import build_structure, default_structure
from app.services.discretizer.discretization_service import BER, MOD, discretize_dataset
from app.services.errors import (
    ConfigError,
    EvidenceError,
    ImpossibleEvidenceError,
    PipelineError,
    PriorError,
)
from app.services.experiment.comparison_service import compare_cpt, doppler_sensitivity
from app.services.experiment.file_service import FileService as ExperimentFileService
from app.services.experiment.processing_service import run_experiment
from app.services.experiment.report_service import ReportService
from app.utils.response_formatter import (
    comparison_summary,
    create_error_response,
    create_success_response,
    format_comparison_table,
    format_doppler_table,
    format_posterior_table,
    to_json,
)

EXIT_OK = 0
EXIT_THRESHOLD_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_IO_ERROR = 3
EXIT_IMPOSSIBLE_EVIDENCE = 4


def parse_assignments(items: Optional[Sequence[str]], what: str) -> Dict[str, str]:
    """['VAR=VALUE', ...] -> {VAR: VALUE}; splits on the first '='"""
    error = PriorError if what == "prior" else EvidenceError
    parsed: Dict[str, str] = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name or not value:
            raise error(f"--{what} expects VAR=VALUE, got {item!r}")
        if name in parsed:
            raise error(f"--{what} given twice for {name}")
        parsed[name] = value
    return parsed


def parse_prior(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise PriorError(f"prior must be comma separated numbers, got {text!r}") from None


class BerPipeline:
    """Wires the services together for the five subcommands"""

    def __init__(self, json_output: bool = False):
        self.json_output = json_output
        self.logger = logging.getLogger(f"{__name__}.BerPipeline")
        self.experiment_files = ExperimentFileService()
        self.cpt_files = CptFileService()

    def _say(self, message: str = ""):
        """Status line for humans; kept off stdout when stdout carries JSON"""
        print(message, file=sys.stderr if self.json_output else sys.stdout)

    def _emit(self, message: str, data: Dict):
        if self.json_output:
            print(to_json(create_success_response(message, data)))

    def load_config(self, config_path: Optional[str], seed: Optional[int] = None,
                    trials: Optional[int] = None, bits: Optional[int] = None) -> ExperimentConfig:
        """Config file (or defaults) with CLI overrides applied on top"""
        config = self.experiment_files.load_config(config_path) if config_path else ExperimentConfig()
        overrides = {k: v for k, v in (("master_seed", seed), ("trials_per_combo", trials),
                                       ("bits_per_trial", bits)) if v is not None}
        if not overrides:
            return config
        try:
            return ExperimentConfig.model_validate({**config.model_dump(mode="json"), **overrides})
        except ValidationError as e:
            raise ConfigError(f"invalid override: {e}") from e

    # ---- subcommands -------------------------------------------------------------------

    def cmd_simulate(self, config_path: Optional[str], out_path: str, seed: Optional[int] = None,
                     trials: Optional[int] = None, bits: Optional[int] = None,
                     workers: Optional[int] = None) -> int:
        config = self.load_config(config_path, seed, trials, bits)
        self._say(f"🚀 Simulating {len(config.modulations)} modulation(s), "
                  f"{config.trials_per_combo} trials x {config.bits_per_trial} bits per combination")
        records = run_experiment(config, workers)
        path = self.experiment_files.write_dataset(records, out_path)
        self._say(f"✅ Wrote {len(records)} records to {path}")
        self._emit("simulate", {"records": len(records), "dataset": str(path)})
        return EXIT_OK

    def cmd_learn(self, dataset_path: str, out_path: str, pseudocount: float = 0.0,
                  modulation: Optional[str] = None, config_path: Optional[str] = None) -> int:
        config = self.load_config(config_path)
        trials = self.experiment_files.read_dataset(dataset_path)
        if modulation is not None:
            known = config.spec_map()[MOD].state_names
            if modulation not in known:
                raise ConfigError(f"unknown modulation {modulation!r}; expected one of {list(known)}")
            trials = [t for t in trials if t.modulation == modulation]
            self._say(f"🔍 Kept {len(trials)} {modulation} records")

        records = discretize_dataset(trials, config.specs(), clamp=config.clamp_out_of_range)
        cpt = learn_cpt(records, default_structure(), BER, pseudocount, config.specs())
        path = self.cpt_files.write_cpt(cpt, out_path)

        self._say(f"✅ Learned CPT {cpt.child} | {', '.join(cpt.parents)} from {len(records)} records")
        self._say(f"📊 Rows: {len(cpt.rows)}")
        self._say(f"📊 Unobserved rows: {cpt.unobserved_count}")
        if cpt.unobserved_count:
            self._say(f"⚠️ {cpt.unobserved_count} rows had no records and were set to uniform")
        self._say(f"💾 Saved to {path}")
        self._emit("learn", {"rows": len(cpt.rows), "unobserved_rows": cpt.unobserved_count,
                             "records": len(records), "cpt": str(path)})
        return EXIT_OK

    def _network_from_cpt(self, cpt: Cpt) -> BayesNet:
        structure = build_structure(list(cpt.parents) + [cpt.child],
                                    [(parent, cpt.child) for parent in cpt.parents])
        return BayesNet.from_cpts(structure, [cpt])

    def cmd_infer(self, cpt_path: str, evidence: Optional[Sequence[str]] = None,
                  priors: Optional[Sequence[str]] = None) -> int:
        cpt = self.cpt_files.read_cpt(cpt_path)
        net = self._network_from_cpt(cpt)
        for variable, text in parse_assignments(priors, "prior").items():
            net = net.with_prior(variable, parse_prior(text))

        observed = parse_assignments(evidence, "evidence")
        posterior = net.infer(observed)

        if posterior.unobserved_rows:
            self._say(f"⚠️ Posterior uses {posterior.unobserved_rows} CPT rows learned from no records")
        if self.json_output:
            self._emit("infer", posterior.to_dict())
        else:
            shown = ", ".join(f"{k}={v}" for k, v in observed.items()) or "none"
            print(f"🔍 Evidence: {shown}")
            print(format_posterior_table(posterior))
        return EXIT_OK

    def cmd_validate(self, cpt_path: str, reference_path: Optional[str] = None,
                     threshold: Optional[float] = None,
                     interior_threshold: Optional[float] = None) -> int:
        learned = self.cpt_files.read_table(cpt_path)
        reference = self.cpt_files.read_reference(reference_path or settings.REFERENCE_TABLES_PATH)

        report = compare_cpt(learned, reference, threshold, interior_threshold)
        modulations = list(dict.fromkeys(key[0] for key in learned.probabilities))
        report.doppler_checks = doppler_sensitivity(learned, modulations)

        if self.json_output:
            payload = create_success_response("validate", report.model_dump(mode="json"))
            payload["data"]["summary"] = comparison_summary(report)
            print(to_json(payload))
        else:
            print(format_comparison_table(report))
            if report.doppler_checks:
                print("\n📊 Doppler sensitivity (p(BER_1) at the lowest minus the highest Dop_Phi state):")
                print(format_doppler_table(report.doppler_checks))
            summary = comparison_summary(report)
            print(f"\n📊 Rows compared: {summary['rows']}, failed: {summary['failed_rows']}")
            print(f"📊 Max TV distance: {summary['max_distance']:.4f}, "
                  f"mean: {summary['mean_distance']:.4f}")

        weak = [c.modulation for c in report.doppler_checks if not c.passed]
        if weak:
            self._say(f"⚠️ Doppler sensitivity below {report.doppler_checks[0].required} for {weak}")
        if report.passed:
            self._say("✅ All rows within their thresholds")
            return EXIT_OK
        self._say(f"❌ {len(report.failed_rows)} rows exceed their thresholds")
        return EXIT_THRESHOLD_FAILED

    def cmd_report(self, out_dir: str, cpt_path: Optional[str] = None,
                   config_path: Optional[str] = None, seed: Optional[int] = None,
                   bits: Optional[int] = None, workers: Optional[int] = None) -> int:
        config = self.load_config(config_path, seed)
        cpt = self.cpt_files.read_cpt(cpt_path) if cpt_path else None
        workers = settings.simulation.WORKERS if workers is None else workers

        written = ReportService(out_dir).write_report(
            cpt, config.modulations, config.master_seed, n_bits=bits,
            doppler_model=config.doppler_model, workers=workers,
        )
        for name, path in written.items():
            self._say(f"💾 {name}: {path}")
        self._emit("report", {name: str(path) for name, path in written.items()})
        return EXIT_OK

    def run(self, args: argparse.Namespace) -> int:
        """Dispatch a parsed command line and map failures onto exit codes"""
        try:
            if args.command == "simulate":
                return self.cmd_simulate(args.config, args.out, args.seed, args.trials, args.bits,
                                         args.workers)
            if args.command == "learn":
                return self.cmd_learn(args.dataset, args.out, args.pseudocount, args.modulation,
                                      args.config)
            if args.command == "infer":
                return self.cmd_infer(args.cpt, args.evidence, args.prior)
            if args.command == "validate":
                return self.cmd_validate(args.cpt, args.reference, args.threshold,
                                         args.interior_threshold)
            if args.command == "report":
                return self.cmd_report(args.out, args.cpt, args.config, args.seed, args.bits,
                                       args.workers)
            raise ConfigError(f"unknown command {args.command!r}")
        except ImpossibleEvidenceError as e:
            return self._fail(EXIT_IMPOSSIBLE_EVIDENCE, e)
        except PipelineError as e:
            return self._fail(EXIT_INPUT_ERROR, e)
        except OSError as e:
            return self._fail(EXIT_IO_ERROR, e)

    def _fail(self, code: int, error: Exception) -> int:
        self.logger.error(f"{type(error).__name__}: {error}")
        if self.json_output:
            print(to_json(create_error_response(type(error).__name__, str(error))))
        else:
            print(f"❌ {error}", file=sys.stderr)
        return code


def _setup_logging(verbose: bool = False):
    """stderr handler (plus a file handler under LOG_DIR); stdout is left to command output"""
    level = logging.DEBUG if verbose else getattr(logging, settings.logging.LOG_LEVEL.upper(), logging.INFO)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.logging.LOG_DIR:
        log_dir = Path(settings.logging.LOG_DIR)
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / "ber_pipeline.log", encoding="utf-8"))
    logging.basicConfig(level=level, format=settings.logging.LOG_FORMAT, handlers=handlers, force=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    common.add_argument("--json", action="store_true", help="Machine-readable output on stdout")

    parser = argparse.ArgumentParser(
        prog="ber_pipeline",
        description="Bayesian-network model of BER: simulate, learn, infer, validate, report",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="Run the Monte Carlo grid and write the dataset CSV")
    simulate.add_argument("--config", help="Experiment config JSON (defaults when omitted)")
    simulate.add_argument("--out", default=str(settings.DATA_DIR / "dataset.csv"), help="Dataset CSV to write")
    simulate.add_argument("--seed", type=int, help="Override master_seed")
    simulate.add_argument("--trials", type=int, help="Override trials_per_combo")
    simulate.add_argument("--bits", type=int, help="Override bits_per_trial")
    simulate.add_argument("--workers", type=int, help=f"joblib n_jobs (default: {settings.simulation.WORKERS})")

    learn = sub.add_parser("learn", parents=[common], help="Learn the BER CPT from a dataset")
    learn.add_argument("--dataset", default=str(settings.DATA_DIR / "dataset.csv"), help="Dataset CSV to read")
    learn.add_argument("--out", default=str(settings.DATA_DIR / "cpt.json"), help="CPT JSON to write")
    learn.add_argument("--config", help="Experiment config JSON holding the variable definitions")
    learn.add_argument("--pseudocount", type=float, default=0.0, help="Additive smoothing (default: 0)")
    learn.add_argument("--modulation", help="Learn from the records of one modulation only")

    infer = sub.add_parser("infer", parents=[common], help="Posterior distributions given evidence")
    infer.add_argument("--cpt", default=str(settings.DATA_DIR / "cpt.json"), help="CPT JSON to read")
    infer.add_argument("--evidence", action="append", metavar="VAR=STATE", help="Observed state (repeatable)")
    infer.add_argument("--prior", action="append", metavar="VAR=p1,p2,...", help="Root prior (repeatable)")

    validate = sub.add_parser("validate", parents=[common], help="Compare a CPT with the reference tables")
    validate.add_argument("--cpt", default=str(settings.DATA_DIR / "cpt.json"), help="CPT JSON to check")
    validate.add_argument("--reference", help=f"Reference CPT JSON (default: {settings.REFERENCE_TABLES_PATH})")
    validate.add_argument("--threshold", type=float,
                          help=f"TV limit for degenerate rows (default: {settings.validation.DEGENERATE_THRESHOLD})")
    validate.add_argument("--interior-threshold", type=float,
                          help=f"TV limit for interior rows (default: {settings.validation.INTERIOR_THRESHOLD})")

    report = sub.add_parser("report", parents=[common], help="Write CPT tables and BER sweep curves (CSV + SVG)")
    report.add_argument("--out", default=str(settings.DATA_DIR / "report"), help="Output directory")
    report.add_argument("--cpt", help="CPT JSON to tabulate and plot")
    report.add_argument("--config", help="Experiment config JSON (modulations, seed, Doppler model)")
    report.add_argument("--seed", type=int, help="Override master_seed")
    report.add_argument("--bits", type=int, help=f"Bits per sweep point (default: {settings.report.SWEEP_BITS})")
    report.add_argument("--workers", type=int, help="joblib n_jobs")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else EXIT_OK

    _setup_logging(args.verbose)
    return BerPipeline(json_output=args.json).run(args)


if __name__ == "__main__":
    sys.exit(main())
