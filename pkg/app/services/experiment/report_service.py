# app/services/experiment/report_service.py - CPT tables and BER curves as CSV + SVG
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from app.config.settings import settings  # noqa: E402
from app.models.link_models import BITS_PER_SYMBOL, LinkScenario  # noqa: E402
from app.models.network_models import Cpt  # noqa: E402
from app.services.channel.impairment_service import DopplerModel, theoretical_dbpsk_ber  # noqa: E402
from app.services.discretizer.discretization_service import CI, DOP_PHI, EBN0, MOD  # noqa: E402
from app.services.errors import CptKeyMismatchError  # noqa: E402
from app.services.experiment.processing_service import run_scenarios  # noqa: E402

# fixed ids and no creation date, so identical inputs give identical SVG files
plt.rcParams["svg.hashsalt"] = "ber-report"
SVG_METADATA = {"Date": None}

# keeps sweep seeds apart from the grid's (combination, trial) spawn keys
SWEEP_SPAWN_KEY = 1_000_003


class ReportService:
    """Writes the report artifacts into one output directory"""

    CPT_ROWS_FILE = "cpt_rows.csv"
    BER1_PLOT_FILE = "ber1_by_state.svg"
    SWEEP_CSV_FILE = "sweep_curves.csv"
    SWEEP_PLOT_FILE = "sweep_curves.svg"

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)
        self.logger = logging.getLogger(f"{__name__}.ReportService")

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    @staticmethod
    def cpt_rows_frame(cpt: Cpt) -> pd.DataFrame:
        """One line per parent combination: parent states, child probabilities, n, observed"""
        records = []
        for key in cpt.row_keys():
            row = cpt.rows[key]
            record = dict(zip(cpt.parents, key))
            record.update(zip(cpt.child_states, row.probs))
            record["n"] = row.n
            record["observed"] = row.observed
            records.append(record)
        columns = list(cpt.parents) + list(cpt.child_states) + ["n", "observed"]
        return pd.DataFrame(records, columns=columns)

    def write_cpt_rows(self, cpt: Cpt) -> Path:
        path = self._path(self.CPT_ROWS_FILE)
        self.cpt_rows_frame(cpt).to_csv(path, index=False, lineterminator="\n")
        return path

    def plot_first_state_by_row(self, cpt: Cpt, ebn0_state: Optional[str] = None) -> Path:
        """p(BER_1) per modulation over the (C/I, Dop_Phi) rows at one EbN0 state (default: the highest)"""
        if tuple(cpt.parents) != (MOD, EBN0, CI, DOP_PHI):
            raise CptKeyMismatchError(f"expected parents {[MOD, EBN0, CI, DOP_PHI]}, got {list(cpt.parents)}")
        mods, ebn0_states, ci_states, phi_states = cpt.parent_states
        if ebn0_state is None:
            ebn0_state = ebn0_states[-1]
        elif ebn0_state not in ebn0_states:
            raise CptKeyMismatchError(f"{EBN0} state {ebn0_state!r} not in the CPT; states are {list(ebn0_states)}")
        labels = [f"{ci} {phi}" for ci in ci_states for phi in phi_states]

        fig, ax = plt.subplots(figsize=(11, 4.5))
        for modulation in mods:
            values = [cpt.rows[(modulation, ebn0_state, ci, phi)].probs[0]
                      for ci in ci_states for phi in phi_states]
            ax.plot(range(len(labels)), values, marker="o", linewidth=1.5, label=modulation)
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=70, fontsize=7)
        ax.set_ylim(-0.02, 1.02)
        ax.set_ylabel(f"p({cpt.child_states[0]})")
        ax.set_title(f"p({cpt.child_states[0]}) per modulation at {ebn0_state}")
        ax.grid(True, alpha=0.3)
        ax.legend(loc="lower right")
        fig.tight_layout()

        path = self._path(self.BER1_PLOT_FILE)
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
        plt.close(fig)
        return path

    def sweep_frame(self, modulations: Sequence[str], ebn0_values: Sequence[float], n_bits: int,
                    master_seed: int, ci_db: float = math.inf, dop_phi_rad: float = 0.0,
                    doppler_model: DopplerModel = DopplerModel.RAMP,
                    workers: int = 1) -> pd.DataFrame:
        """Simulated BER against Eb/N0 for each modulation, plus the closed-form DBPSK value"""
        scenarios: List[LinkScenario] = []
        for m, modulation in enumerate(modulations):
            k = BITS_PER_SYMBOL[modulation]
            for i, ebn0 in enumerate(ebn0_values):
                seq = np.random.SeedSequence(master_seed, spawn_key=(SWEEP_SPAWN_KEY, m, i))
                scenarios.append(LinkScenario(
                    modulation=modulation,
                    ebn0_db=float(ebn0),
                    ci_db=ci_db,
                    dop_phi_rad=dop_phi_rad,
                    n_bits=max(k, n_bits - n_bits % k),
                    seed=int(seq.generate_state(1, dtype=np.uint64)[0]),
                ))
        records = run_scenarios(scenarios, workers, doppler_model)

        frame = pd.DataFrame([r.to_dict() for r in records])
        frame = frame[["mod", "ebn0_db", "n_bits", "n_errors", "ber"]].copy()
        frame["dbpsk_theory"] = theoretical_dbpsk_ber(frame["ebn0_db"].to_numpy())
        return frame

    def plot_sweep(self, frame: pd.DataFrame) -> Path:
        fig, ax = plt.subplots(figsize=(7, 5))
        for modulation, group in frame.groupby("mod", sort=False):
            ber = group["ber"].to_numpy(dtype=float)
            ber = np.where(ber > 0, ber, np.nan)  # zero counts cannot be drawn on a log axis
            ax.semilogy(group["ebn0_db"], ber, marker="o", linewidth=1.5, label=f"{modulation} simulated")

        grid = np.linspace(frame["ebn0_db"].min(), frame["ebn0_db"].max(), 200)
        ax.semilogy(grid, theoretical_dbpsk_ber(grid), "k--", linewidth=1, label="DBPSK 0.5*exp(-Eb/N0)")
        ax.set_xlabel("Eb/N0 (dB)")
        ax.set_ylabel("Bit Error Rate (BER)")
        ax.set_ylim(1e-6, 1)
        ax.set_title("BER vs Eb/N0")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(loc="lower left")
        fig.tight_layout()

        path = self._path(self.SWEEP_PLOT_FILE)
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
        plt.close(fig)
        return path

    def write_report(self, cpt: Optional[Cpt], modulations: Sequence[str], master_seed: int,
                     ebn0_values: Optional[Sequence[float]] = None, n_bits: Optional[int] = None,
                     doppler_model: DopplerModel = DopplerModel.RAMP,
                     workers: int = 1) -> Dict[str, Path]:
        """All report files; the CPT files are skipped when no CPT is given"""
        cfg = settings.report
        if ebn0_values is None:
            ebn0_values = np.arange(cfg.SWEEP_EBN0_MIN_DB,
                                    cfg.SWEEP_EBN0_MAX_DB + cfg.SWEEP_EBN0_STEP_DB / 2,
                                    cfg.SWEEP_EBN0_STEP_DB)
        n_bits = cfg.SWEEP_BITS if n_bits is None else n_bits

        written: Dict[str, Path] = {}
        if cpt is not None:
            written["cpt_rows"] = self.write_cpt_rows(cpt)
            if tuple(cpt.parents) == (MOD, EBN0, CI, DOP_PHI):
                written["ber1_by_state"] = self.plot_first_state_by_row(cpt)
            else:
                self.logger.warning(f"⚠️ Skipping {self.BER1_PLOT_FILE}: CPT parents are {list(cpt.parents)}")

        frame = self.sweep_frame(modulations, ebn0_values, n_bits, master_seed,
                                 doppler_model=doppler_model, workers=workers)
        sweep_csv = self._path(self.SWEEP_CSV_FILE)
        frame.to_csv(sweep_csv, index=False, lineterminator="\n")
        written["sweep_curves_csv"] = sweep_csv
        written["sweep_curves_svg"] = self.plot_sweep(frame)

        for name, path in written.items():
            self.logger.info(f"💾 {name}: {path}")
        return written
