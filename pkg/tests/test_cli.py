import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from bellgame import __version__
from bellgame.builtin import builtin_game
from bellgame.classical import BellVariant, HiddenVariableModel, hv_model_to_distribution
from bellgame.cli import main
from bellgame.game import (
    GameDefinition,
    Prior,
    UtilityTable,
    dump_game,
    expected_payoffs,
    game_to_json_dict,
)
from bellgame.quantum import (
    BlochObservable,
    MeasurementSetting,
    dump_setting,
    ghz_advisor,
    quantum_bell,
)

F = Fraction


def run_cli(capsys, *argv) -> tuple[int, dict]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else {})


@pytest.fixture()
def optimum_setting_file(tmp_path, reference_angles):
    path = tmp_path / "optimum.json"
    path.write_text(
        json.dumps(
            {
                "phi_A0": reference_angles.a0,
                "phi_A1": reference_angles.a1,
                "phi_B0": reference_angles.b0,
                "phi_B1": reference_angles.b1,
                "phi_C0": reference_angles.c0,
                "phi_C1": reference_angles.c1,
            }
        )
    )
    return str(path)


class TestEquilibriaCommand:
    def test_builtin_reproduces_known_equilibria(self, capsys):
        code, report = run_cli(capsys, "equilibria")
        assert code == 0
        results = report["results"]
        assert results["count"] == 9
        assert results["total_payoff_bound"] == "9/4"
        payoff_sets = {
            tuple(sorted(e["payoffs"].values())) for e in results["equilibria"]
        }
        assert payoff_sets == {
            tuple(sorted(("5/8", "13/16", "13/16"))),
            tuple(sorted(("11/8", "7/16", "7/16"))),
            ("3/4", "3/4", "3/4"),
        }
        assert sum(e["fair"] for e in results["equilibria"]) == 3
        assert all(e["saturates_bound"] for e in results["equilibria"])

    def test_constant_utility_file_yields_64(self, capsys, tmp_path):
        game = GameDefinition(UtilityTable.constant(F(1, 2)), Prior.uniform())
        path = tmp_path / "constant.json"
        dump_game(game, path)
        code, report = run_cli(capsys, "equilibria", "--game", str(path))
        assert code == 0
        assert report["results"]["count"] == 64

    def test_unnormalized_prior_exits_2_naming_field(self, capsys, tmp_path):
        doc = game_to_json_dict(builtin_game())
        for key in doc["prior"]:
            doc["prior"][key] = "1/10"
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code = main(["equilibria", "--game", str(path)])
        captured = capsys.readouterr()
        assert code == 2
        assert "prior" in captured.err

    def test_missing_file_exits_4(self, capsys):
        code = main(["equilibria", "--game", "/nonexistent/game.json"])
        assert code == 4

    def test_asymmetric_game_warns_but_runs(self, capsys, tmp_path):
        doc = game_to_json_dict(builtin_game())
        doc["utilities"]["A"][0][0] = "3/1"
        path = tmp_path / "warped.json"
        path.write_text(json.dumps(doc))
        code = main(["equilibria", "--game", str(path)])
        captured = capsys.readouterr()
        assert code == 0
        assert "not player-symmetric" in captured.err

    def test_out_file(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        code = main(["equilibria", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["command"] == "equilibria"
        assert report["engine_version"] == __version__
        assert report["inputs"]["game_digest"].startswith("sha256:")

    def test_round_tripped_game_gives_identical_digest(self, capsys, tmp_path):
        path = tmp_path / "copy.json"
        dump_game(builtin_game(), path)
        _, builtin_report = run_cli(capsys, "equilibria")
        _, file_report = run_cli(capsys, "equilibria", "--game", str(path))
        assert (
            file_report["inputs"]["game_digest"]
            == builtin_report["inputs"]["game_digest"]
        )
        assert file_report["results"] == builtin_report["results"]


class TestAuditCommand:
    def test_bound_and_bell_extremes(self, capsys):
        code, report = run_cli(capsys, "audit-bound", "--samples", "200")
        assert code == 0
        results = report["results"]
        assert results["deterministic"]["max_total"] == "9/4"
        assert results["deterministic"]["attainer_count"] == 16
        assert results["samples"]["within_bound"] is True
        assert results["fair_cap"] == "3/4"
        for variant in ("V011", "V100"):
            assert results["bell_extremes"][variant] == {
                "min": "-2/1",
                "max": "2/1",
            }

    def test_zero_samples_still_audits_deterministically(self, capsys):
        code, report = run_cli(capsys, "audit-bound", "--samples", "0")
        assert code == 0
        assert report["results"]["samples"]["max_total"] is None
        assert report["results"]["deterministic"]["max_total"] == "9/4"

    def test_same_seed_gives_identical_results_payload(self, capsys):
        _, first = run_cli(capsys, "audit-bound", "--samples", "150", "--seed", "3")
        _, second = run_cli(capsys, "audit-bound", "--samples", "150", "--seed", "3")
        assert json.dumps(first["results"]) == json.dumps(second["results"])


class TestBellCommand:
    def test_deterministic_extremes_without_setting(self, capsys):
        code, report = run_cli(capsys, "bell")
        assert code == 0
        results = report["results"]
        assert results["source"] == "deterministic-profiles"
        assert results["classical_bound"] == 2
        assert results["extremes"]["V011"]["max"] == "2/1"

    def test_setting_values_match_engine(self, capsys, optimum_setting_file, reference_angles):
        code, report = run_cli(capsys, "bell", "--setting", optimum_setting_file)
        assert code == 0
        values = report["results"]["values"]
        setting = MeasurementSetting.planar(reference_angles)
        advisor = ghz_advisor()
        assert values["V011"] == pytest.approx(
            quantum_bell(advisor, setting, BellVariant.V011), abs=1e-9
        )
        assert values["V100"] == pytest.approx(
            quantum_bell(advisor, setting, BellVariant.V100), abs=1e-9
        )
        assert report["results"]["difference"] > 4
        assert report["inputs"]["setting_digest"].startswith("sha256:")


class TestOptimizeCommand:
    def test_default_run(self, capsys):
        code, report = run_cli(capsys, "optimize")
        assert code == 0
        results = report["results"]
        assert results["optimum"]["value"] == pytest.approx(0.842, abs=1e-3)
        assert results["optimum"]["converged"] is True
        assert results["advantage"]["classical_fair_cap"] == "3/4"
        assert results["advantage"]["beats_classical"] is True
        assert results["advantage"]["quantum_total"] > 2.25
        angles = results["optimum"]["angles"]
        assert set(angles) == {
            "phi_A0", "phi_A1", "phi_B0", "phi_B1", "phi_C0", "phi_C1",
        }

    def test_seed_stability(self, capsys):
        _, first = run_cli(capsys, "optimize", "--seed", "1", "--restarts", "4", "--grid", "8")
        _, second = run_cli(capsys, "optimize", "--seed", "2", "--restarts", "4", "--grid", "8")
        assert first["results"]["optimum"]["value"] == pytest.approx(
            second["results"]["optimum"]["value"], abs=1e-6
        )

    def test_degraded_config_still_reports(self, capsys):
        code, report = run_cli(capsys, "optimize", "--restarts", "1", "--grid", "8")
        assert code in (0, 3)
        assert "value" in report["results"]["optimum"]
        assert isinstance(report["results"]["optimum"]["converged"], bool)

    def test_invalid_grid_exits_2(self, capsys):
        code = main(["optimize", "--grid", "2"])
        assert code == 2


class TestCheckCommand:
    def test_reference_optimum_certified(self, capsys, optimum_setting_file):
        code, report = run_cli(
            capsys,
            "check", "--setting", optimum_setting_file,
            "--restarts", "2", "--grid", "8",
        )
        assert code == 0
        results = report["results"]
        assert results["planar"] is True
        for v in results["payoffs"].values():
            assert v == pytest.approx(0.842, abs=1e-3)
        assert results["row_sum_max_error"] < 1e-12
        assert results["no_signalling_max_residual"] < 1e-12
        assert results["best_response"]["certified_equilibrium"] is True
        assert results["best_response"]["mode"] == "planar"

    def test_all_z_setting_equals_two_point_mixture(self, capsys, tmp_path, table1):
        doc = {}
        for name in "ABC":
            for t in (0, 1):
                doc[f"theta_{name}{t}"] = 0.0
                doc[f"phi_{name}{t}"] = 0.0
        path = tmp_path / "allz.json"
        path.write_text(json.dumps(doc))
        code, report = run_cli(
            capsys,
            "check", "--setting", str(path), "--restarts", "2", "--grid", "8",
        )
        assert code == 0
        results = report["results"]
        assert results["planar"] is False
        mixture = hv_model_to_distribution(
            HiddenVariableModel.from_profiles(
                [
                    (F(1, 2), ((0, 0), (0, 0), (0, 0))),
                    (F(1, 2), ((1, 1), (1, 1), (1, 1))),
                ]
            )
        )
        classical = expected_payoffs(table1.utilities, table1.prior, mixture)
        for key, value in zip("ABC", classical):
            assert results["payoffs"][key] == pytest.approx(float(value), abs=1e-9)

    def test_tilted_setting_reports_three_payoffs(self, capsys, tmp_path):
        doc = {}
        for i, name in enumerate("ABC"):
            for t in (0, 1):
                doc[f"theta_{name}{t}"] = 0.4 + 0.3 * i + 0.2 * t
                doc[f"phi_{name}{t}"] = 0.1 * (i + t)
        path = tmp_path / "tilted.json"
        path.write_text(json.dumps(doc))
        code, report = run_cli(
            capsys,
            "check", "--setting", str(path), "--restarts", "2", "--grid", "8",
        )
        assert code == 0
        results = report["results"]
        assert results["planar"] is False
        assert set(results["payoffs"]) == {"A", "B", "C"}
        for v in results["payoffs"].values():
            assert isinstance(v, float)

    def test_malformed_setting_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"phi_A0": 0.0}))
        code = main(["check", "--setting", str(path)])
        assert code == 2


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "bellgame.cli", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert __version__ in proc.stdout


DOCS = Path(__file__).resolve().parent.parent / "docs"


class TestSchemas:
    def test_bundled_game_matches_schema(self):
        jsonschema = pytest.importorskip("jsonschema")
        from importlib import resources

        schema = json.loads((DOCS / "game.schema.json").read_text())
        doc = json.loads(
            resources.files("bellgame").joinpath("data/table1.json").read_text()
        )
        jsonschema.validate(doc, schema)

    def test_setting_documents_match_schema(self, tmp_path, reference_angles):
        jsonschema = pytest.importorskip("jsonschema")

        schema = json.loads((DOCS / "setting.schema.json").read_text())
        full = tmp_path / "full.json"
        dump_setting(
            MeasurementSetting(
                (BlochObservable(0.1, 0.2), BlochObservable(0.3, 0.4)),
                (BlochObservable(0.5, 0.6), BlochObservable(0.7, 0.8)),
                (BlochObservable(0.9, 1.0), BlochObservable(1.1, 1.2)),
            ),
            full,
        )
        jsonschema.validate(json.loads(full.read_text()), schema)
        planar = {
            f"phi_{name}{t}": 0.5 for name in "ABC" for t in (0, 1)
        }
        jsonschema.validate(planar, schema)
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate({"phi_A0": 0.5}, schema)
