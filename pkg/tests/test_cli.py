import json

import pytest

from app.config.settings import settings
from app.models.variable_models import VariableSpec
from app.schemas import VariableSpecSchema
from app.services.bayes_net import FileService as CptFileService
from app.services.discretizer import default_variable_specs
from app.services.experiment.file_service import FileService as ExperimentFileService
from app.workers.ber_pipeline import (
    EXIT_IMPOSSIBLE_EVIDENCE,
    EXIT_INPUT_ERROR,
    EXIT_IO_ERROR,
    EXIT_OK,
    EXIT_THRESHOLD_FAILED,
    main,
    parse_assignments,
)
from tests.helpers import make_cpt

PARENTS = ("MOD", "EbN0", "C/I", "Dop_Phi")
PARENT_STATES = (
    ("DBPSK", "DQPSK", "D8PSK"),
    tuple(f"EbN0_{i}" for i in range(1, 7)),
    tuple(f"C/I_{i}" for i in range(1, 7)),
    ("Phi_1", "Phi_2", "Phi_3"),
)
BER_STATES = tuple(f"BER_{i}" for i in range(1, 6))


def json_out(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory):
    """Dataset and CPT from the tiny config, produced once through the CLI"""
    root = tmp_path_factory.mktemp("pipeline")
    config = root / "config.json"
    config.write_text(json.dumps({"trials_per_combo": 2, "bits_per_trial": 100, "master_seed": 7}))
    assert main(["simulate", "--config", str(config), "--out", str(root / "dataset.csv")]) == EXIT_OK
    assert main(["learn", "--dataset", str(root / "dataset.csv"), "--out", str(root / "cpt.json")]) == EXIT_OK
    return root


class TestSimulate:
    def test_dataset_is_written(self, pipeline_dir):
        records = ExperimentFileService().read_dataset(pipeline_dir / "dataset.csv")
        assert len(records) == 648

    def test_rerun_is_byte_identical(self, pipeline_dir, tmp_path):
        out = tmp_path / "again.csv"
        code = main(["simulate", "--config", str(pipeline_dir / "config.json"), "--out", str(out),
                     "--workers", "2"])
        assert code == EXIT_OK
        assert out.read_bytes() == (pipeline_dir / "dataset.csv").read_bytes()

    def test_overrides(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        code = main(["simulate", "--json", "--trials", "1", "--bits", "30", "--seed", "1",
                     "--out", str(out)])
        assert code == EXIT_OK
        assert json_out(capsys)["data"]["records"] == 324

    def test_missing_config(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "d.csv")]) == EXIT_INPUT_ERROR

    def test_bad_override(self, tmp_path):
        assert main(["simulate", "--trials", "0", "--out", str(tmp_path / "d.csv")]) == EXIT_INPUT_ERROR

    def test_write_failure(self, tmp_path, mocker):
        mocker.patch.object(ExperimentFileService, "write_dataset", side_effect=OSError("disk full"))
        code = main(["simulate", "--trials", "1", "--bits", "30", "--out", str(tmp_path / "d.csv")])
        assert code == EXIT_IO_ERROR


class TestLearn:
    def test_full_grid_has_no_unobserved_rows(self, pipeline_dir):
        cpt = CptFileService().read_cpt(pipeline_dir / "cpt.json")
        assert len(cpt.rows) == 324
        assert cpt.unobserved_count == 0

    def test_single_modulation(self, pipeline_dir, tmp_path, capsys):
        out = tmp_path / "dbpsk.json"
        code = main(["learn", "--json", "--dataset", str(pipeline_dir / "dataset.csv"),
                     "--out", str(out), "--modulation", "DBPSK"])
        assert code == EXIT_OK
        data = json_out(capsys)["data"]
        assert data["records"] == 216
        assert data["unobserved_rows"] == 216
        cpt = CptFileService().read_cpt(out)
        assert not cpt.rows[("DQPSK", "EbN0_1", "C/I_1", "Phi_1")].observed
        assert cpt.rows[("DBPSK", "EbN0_1", "C/I_1", "Phi_1")].observed

    def test_unknown_modulation(self, pipeline_dir, tmp_path):
        code = main(["learn", "--dataset", str(pipeline_dir / "dataset.csv"),
                     "--out", str(tmp_path / "x.json"), "--modulation", "QAM"])
        assert code == EXIT_INPUT_ERROR

    def test_empty_dataset_learns_uniform_rows(self, tmp_path, capsys):
        dataset = ExperimentFileService().write_dataset([], tmp_path / "empty.csv")
        out = tmp_path / "cpt.json"
        assert main(["learn", "--dataset", str(dataset), "--out", str(out)]) == EXIT_OK
        assert "324 rows had no records" in capsys.readouterr().out
        cpt = CptFileService().read_cpt(out)
        assert cpt.unobserved_count == 324
        assert cpt.rows[("DBPSK", "EbN0_1", "C/I_1", "Phi_1")].probs == (0.2,) * 5

    def test_malformed_dataset(self, tmp_path, capsys):
        dataset = tmp_path / "bad.csv"
        dataset.write_text("mod,ebn0_db,ci_db,dop_phi_rad,n_bits,n_errors,ber\nDBPSK,1.0\n")
        assert main(["learn", "--dataset", str(dataset), "--out", str(tmp_path / "c.json")]) == EXIT_INPUT_ERROR
        assert "line 2" in capsys.readouterr().err


class TestInfer:
    def test_no_evidence_gives_uniform_roots(self, pipeline_dir, capsys):
        assert main(["infer", "--json", "--cpt", str(pipeline_dir / "cpt.json")]) == EXIT_OK
        posteriors = json_out(capsys)["data"]["posteriors"]
        assert posteriors["MOD"] == pytest.approx({"DBPSK": 1 / 3, "DQPSK": 1 / 3, "D8PSK": 1 / 3})
        assert sum(posteriors["BER"].values()) == pytest.approx(1.0)

    def test_worst_ber_points_at_worst_channel(self, pipeline_dir, capsys):
        code = main(["infer", "--json", "--cpt", str(pipeline_dir / "cpt.json"),
                     "--evidence", "BER=BER_5"])
        assert code == EXIT_OK
        data = json_out(capsys)["data"]
        assert data["evidence"] == {"BER": "BER_5"}
        assert "BER" not in data["posteriors"]
        assert data["posteriors"]["EbN0"]["EbN0_1"] > 1 / 6
        assert data["posteriors"]["C/I"]["C/I_1"] > 1 / 6

    def test_table_output(self, pipeline_dir, capsys):
        assert main(["infer", "--cpt", str(pipeline_dir / "cpt.json"), "--evidence", "MOD=D8PSK"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "Evidence: MOD=D8PSK" in out
        assert "BER_1" in out

    def test_prior_changes_the_posterior(self, pipeline_dir, capsys):
        code = main(["infer", "--json", "--cpt", str(pipeline_dir / "cpt.json"),
                     "--prior", "MOD=1,0,0"])
        assert code == EXIT_OK
        assert json_out(capsys)["data"]["posteriors"]["MOD"]["DBPSK"] == pytest.approx(1.0)

    @pytest.mark.parametrize("args", [
        ["--evidence", "BER=BER_9"],
        ["--evidence", "SNR=high"],
        ["--evidence", "BER"],
        ["--prior", "MOD=0.5,0.5"],
        ["--prior", "MOD=a,b,c"],
        ["--prior", "BER=0.2,0.2,0.2,0.2,0.2"],
    ])
    def test_bad_input(self, pipeline_dir, args):
        assert main(["infer", "--cpt", str(pipeline_dir / "cpt.json")] + args) == EXIT_INPUT_ERROR

    def test_impossible_evidence(self, tmp_path, capsys):
        cpt = make_cpt("BER", PARENTS, BER_STATES, PARENT_STATES, lambda combo: (1, 0, 0, 0, 0))
        path = CptFileService().write_cpt(cpt, tmp_path / "cpt.json")
        code = main(["infer", "--json", "--cpt", str(path), "--evidence", "BER=BER_5"])
        assert code == EXIT_IMPOSSIBLE_EVIDENCE
        response = json_out(capsys)
        assert response["success"] is False
        assert response["error_type"] == "ImpossibleEvidenceError"

    def test_missing_cpt(self, tmp_path):
        assert main(["infer", "--cpt", str(tmp_path / "none.json")]) == EXIT_INPUT_ERROR


class TestValidate:
    def test_reference_against_itself(self, capsys):
        path = str(settings.REFERENCE_TABLES_PATH)
        assert main(["validate", "--json", "--cpt", path]) == EXIT_OK
        data = json_out(capsys)["data"]
        assert data["max_distance"] == 0.0
        assert data["summary"]["rows"] == 144

    def test_threshold_failure(self, tmp_path):
        cpt = make_cpt("BER", PARENTS, BER_STATES, PARENT_STATES, lambda combo: (0, 0, 0, 0, 1))
        path = CptFileService().write_cpt(cpt, tmp_path / "cpt.json")
        assert main(["validate", "--cpt", str(path)]) == EXIT_THRESHOLD_FAILED

    def test_loose_thresholds_pass(self, tmp_path):
        cpt = make_cpt("BER", PARENTS, BER_STATES, PARENT_STATES, lambda combo: (0, 0, 0, 0, 1))
        path = CptFileService().write_cpt(cpt, tmp_path / "cpt.json")
        code = main(["validate", "--cpt", str(path), "--threshold", "1", "--interior-threshold", "1"])
        assert code == EXIT_OK

    def test_state_mismatch(self, tmp_path):
        cpt = make_cpt("BER", PARENTS, ("low", "high"), PARENT_STATES, lambda combo: (0.5, 0.5))
        path = CptFileService().write_cpt(cpt, tmp_path / "cpt.json")
        assert main(["validate", "--cpt", str(path)]) == EXIT_INPUT_ERROR

    def test_malformed_cpt(self, tmp_path):
        path = tmp_path / "cpt.json"
        path.write_text("{}")
        assert main(["validate", "--cpt", str(path)]) == EXIT_INPUT_ERROR


class TestReport:
    def test_writes_sweep_and_cpt_files(self, pipeline_dir, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"modulations": ["DBPSK", "D8PSK"]}))
        out = tmp_path / "report"
        code = main(["report", "--json", "--out", str(out), "--config", str(config),
                     "--cpt", str(pipeline_dir / "cpt.json"), "--bits", "300"])
        assert code == EXIT_OK
        written = json_out(capsys)["data"]
        assert set(written) == {"cpt_rows", "ber1_by_state", "sweep_curves_csv", "sweep_curves_svg"}
        sweep = (out / "sweep_curves.csv").read_text().splitlines()
        assert len(sweep) == 1 + 2 * 21

    def test_sweep_only(self, tmp_path):
        out = tmp_path / "report"
        assert main(["report", "--out", str(out), "--bits", "100"]) == EXIT_OK
        assert sorted(p.name for p in out.iterdir()) == ["sweep_curves.csv", "sweep_curves.svg"]

    def test_custom_ebn0_discretization_end_to_end(self, tmp_path):
        specs = [VariableSpec.from_boundaries("EbN0", "dB", "Lvl", (-72.8, 10, 109.1))
                 if spec.name == "EbN0" else spec for spec in default_variable_specs()]
        config = tmp_path / "config.json"
        config.write_text(json.dumps({
            "variables": [VariableSpecSchema.from_spec(s).model_dump(mode="json") for s in specs],
            "trials_per_combo": 1, "bits_per_trial": 30, "modulations": ["DBPSK"],
        }))
        dataset, cpt = tmp_path / "d.csv", tmp_path / "cpt.json"
        assert main(["simulate", "--config", str(config), "--out", str(dataset)]) == EXIT_OK
        assert main(["learn", "--config", str(config), "--dataset", str(dataset), "--out", str(cpt)]) == EXIT_OK
        assert CptFileService().read_cpt(cpt).parent_states[1] == ("Lvl_1", "Lvl_2")

        out = tmp_path / "report"
        code = main(["report", "--config", str(config), "--cpt", str(cpt), "--out", str(out), "--bits", "100"])
        assert code == EXIT_OK
        assert (out / "ber1_by_state.svg").exists()


def test_usage_errors():
    assert main([]) == EXIT_INPUT_ERROR
    assert main(["simulate", "--bogus"]) == EXIT_INPUT_ERROR


def test_parse_assignments_splits_on_first_equals():
    assert parse_assignments(["C/I=C/I_2", "MOD=DBPSK"], "evidence") == {"C/I": "C/I_2", "MOD": "DBPSK"}