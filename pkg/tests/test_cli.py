from __future__ import annotations

import csv
import json

import pytest
from typer.testing import CliRunner

from crnstab.main import ExitCode, app
from crnstab.parser import format_network, load_network, parse_network
from tests.conftest import NETWORKS_DIR, SHRUNK_CANDIDATE_TEXT, TRIANGLE_Q21_TEXT

TRIANGLE = str(NETWORKS_DIR / "triangle.crn")
TRIANGLE_ALT = str(NETWORKS_DIR / "triangle_realized_alt.crn")
CANDIDATE = str(NETWORKS_DIR / "shrunk_candidate.crn")
REFERENCE = str(NETWORKS_DIR / "shrunk_reference.crn")

runner = CliRunner()


def first_json(text: str) -> dict:
    return json.JSONDecoder().raw_decode(text, text.index("{"))[0]


def read_rows(path) -> list[dict[str, str]]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture
def write_network(tmp_path):
    def write(text: str, name: str = "net.crn") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


class TestAnalyze:
    def test_triangle(self):
        result = runner.invoke(app, ["analyze", TRIANGLE])
        assert result.exit_code == ExitCode.OK, result.output
        assert "deficiency: 0, weakly reversible: yes" in result.output
        assert "CB equilibrium: (1, 1)" in result.output

    def test_candidate_is_not_weakly_reversible(self):
        result = runner.invoke(app, ["analyze", CANDIDATE])
        assert result.exit_code == ExitCode.OK
        assert "weakly reversible: no" in result.output
        assert "CB equilibrium" not in result.output

    def test_json(self):
        result = runner.invoke(app, ["analyze", TRIANGLE, "--format", "json"])
        payload = first_json(result.stdout)
        assert payload["deficiency"] == 0
        assert payload["weakly_reversible"] is True
        assert payload["equilibrium"] is not None

    def test_malformed_file(self, write_network):
        result = runner.invoke(app, ["analyze", write_network("A -> : k=1\n")])
        assert result.exit_code == ExitCode.PARSE_ERROR

    def test_missing_file(self, tmp_path):
        result = runner.invoke(app, ["analyze", str(tmp_path / "absent.crn")])
        assert result.exit_code == ExitCode.PARSE_ERROR


class TestRealize:
    @pytest.mark.parametrize(
        ("q", "expected"),
        [
            ("2,1", TRIANGLE_Q21_TEXT),
            (
                "2,2",
                "A -> 2B : k=1, tau=1\n"
                "2B -> 2A + 2B : k=1/2, tau=1/2\n"
                "2A + 2B -> A : k=1/8, tau=1/4\n",
            ),
            ("1,1", (NETWORKS_DIR / "triangle.crn").read_text()),
        ],
    )
    def test_writes_realization(self, tmp_path, q, expected):
        out = tmp_path / "realized.crn"
        result = runner.invoke(app, ["realize", TRIANGLE, "--Q", q, "--output", str(out)])
        assert result.exit_code == ExitCode.OK, result.output
        assert format_network(load_network(out)) == format_network(parse_network(expected))

    def test_wrong_length_is_a_usage_error(self):
        result = runner.invoke(app, ["realize", TRIANGLE, "--Q", "2,1,1"])
        assert result.exit_code == 2  # noqa: PLR2004

    def test_delayed_self_loop(self, write_network):
        path = write_network("A -> 2A : k=1, tau=1\nB -> A : k=1\n")
        result = runner.invoke(app, ["realize", path, "--Q", "1,2"])
        assert result.exit_code == ExitCode.ANALYSIS_ERROR


class TestClassify:
    def test_accepted(self):
        result = runner.invoke(app, ["classify", CANDIDATE, "--against", REFERENCE])
        assert result.exit_code == ExitCode.OK, result.output
        assert "accepted" in result.output
        assert "b = 1, 1/2" in result.output
        assert "companion DCB delays: 1/10, 2" in result.output

    def test_perturbed_rates_rejected(self, write_network):
        path = write_network("3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 2A + B : k=1/2, tau=1\n")
        result = runner.invoke(app, ["classify", path, "--against", REFERENCE])
        assert result.exit_code == ExitCode.REJECTED
        assert "rejected" in result.output

    def test_species_mismatch(self, write_network):
        path = write_network("3A -> A + 2C : k=1\nA + 2C -> 3A : k=1\n")
        result = runner.invoke(app, ["classify", CANDIDATE, "--against", path])
        assert result.exit_code == ExitCode.ANALYSIS_ERROR

    def test_json(self):
        result = runner.invoke(
            app, ["classify", CANDIDATE, "--against", REFERENCE, "--format", "json"]
        )
        payload = first_json(result.stdout)
        assert payload["accepted"] is True
        assert payload["b"] == ["1", "1/2"]
        assert payload["companion"] is not None


class TestConjugate:
    def test_alternative_realization_under_q(self):
        result = runner.invoke(
            app, ["conjugate", TRIANGLE_ALT, "--against", TRIANGLE, "--Q", "2,1", "-f", "json"]
        )
        assert result.exit_code == ExitCode.OK, result.output
        payload = first_json(result.stdout)
        assert payload["report"]["conjugate"] is True
        assert payload["report"]["mismatches"] == []

    def test_wrong_q_rejected(self):
        result = runner.invoke(
            app, ["conjugate", TRIANGLE_ALT, "--against", TRIANGLE, "--Q", "1,1"]
        )
        assert result.exit_code == ExitCode.REJECTED

    def test_search_without_q(self):
        result = runner.invoke(app, ["conjugate", CANDIDATE, "--against", REFERENCE])
        assert result.exit_code == ExitCode.REJECTED
        assert "conjugate for some Q: no" in result.output
        assert "same undelayed dynamics: yes" in result.output


class TestSimulate:
    def test_zero_horizon(self, tmp_path):
        out = tmp_path / "run.csv"
        result = runner.invoke(app, [
            "simulate", CANDIDATE, "--history", "const:5,1", "--t-end", "0", "--output", str(out)
        ])
        assert result.exit_code == ExitCode.OK, result.output
        rows = read_rows(out)
        assert len(rows) == 1
        assert float(rows[0]["t"]) == 0.0
        assert float(rows[0]["x_A"]) == 5.0
        assert float(rows[0]["x_B"]) == 1.0

    def test_sampled_rows(self, tmp_path):
        out = tmp_path / "run.csv"
        result = runner.invoke(app, [
            "simulate", CANDIDATE, "--tau", "2,1/2", "--history", "expr:sin(s)+1,cos(s)+1",
            "--t-end", "2", "--sample-every", "0.5", "--output", str(out),
        ])
        assert result.exit_code == ExitCode.OK, result.output
        rows = read_rows(out)
        assert [float(row["t"]) for row in rows] == [0.0, 0.5, 1.0, 1.5, 2.0]
        assert all(float(row["x_A"]) > 0 and float(row["x_B"]) > 0 for row in rows)

    def test_positivity_lost(self, write_network):
        path = write_network("2A -> 0 : k=1\n0 -> A : k=1/100\n")
        result = runner.invoke(app, [
            "simulate", path, "--history", "const:100", "--t-end", "1", "--step", "0.1"
        ])
        assert result.exit_code == ExitCode.POSITIVITY_LOST

    def test_rows_stop_at_requested_end(self, tmp_path):
        out = tmp_path / "run.csv"
        result = runner.invoke(app, [
            "simulate", CANDIDATE, "--history", "const:2,1", "--t-end", "1.000003",
            "--sample-every", "0.25", "--output", str(out),
        ])
        assert result.exit_code == ExitCode.OK, result.output
        times = [float(row["t"]) for row in read_rows(out)]
        assert times[-1] == pytest.approx(1.000003)
        assert max(times) <= 1.000003 + 1e-12

    def test_delays_too_fine_to_align(self):
        result = runner.invoke(app, [
            "simulate", CANDIDATE, "--tau", "0.1234567,1", "--history", "const:5,1",
            "--t-end", "100",
        ])
        assert result.exit_code == ExitCode.PARSE_ERROR
        assert "max_steps" in result.output

    def test_bad_history(self):
        result = runner.invoke(app, ["simulate", CANDIDATE, "--history", "const:5"])
        assert result.exit_code == ExitCode.PARSE_ERROR

    def test_batch(self, tmp_path):
        (tmp_path / "candidate.crn").write_text(SHRUNK_CANDIDATE_TEXT)
        (tmp_path / "batch.yaml").write_text(
            "network: candidate.crn\n"
            "t_end: 1\n"
            "sample_every: 0.5\n"
            "scenarios:\n"
            "  - name: constant\n"
            "    history: const:5,1\n"
            "    output: out/constant.csv\n"
            "  - name: trig\n"
            "    tau: ['2', '1/2']\n"
            "    history: expr:sin(s)+1,cos(s)+1\n"
            "    output: out/trig.csv\n"
        )
        result = runner.invoke(
            app, ["simulate", "--batch", str(tmp_path / "batch.yaml"), "--workers", "2"]
        )
        assert result.exit_code == ExitCode.OK, result.output
        for name in ("constant", "trig"):
            assert len(read_rows(tmp_path / "out" / f"{name}.csv")) == 3  # noqa: PLR2004


class TestVerify:
    def test_dissipation_and_conservation(self, tmp_path):
        out = tmp_path / "verify.csv"
        result = runner.invoke(app, [
            "verify", CANDIDATE, "--history", "const:5,1", "--t-end", "2",
            "--sample-every", "0.5", "--against", REFERENCE, "--conserved",
            "--output", str(out),
        ])
        assert result.exit_code == ExitCode.OK, result.output
        rows = read_rows(out)
        assert list(rows[0]) == ["t", "x_A", "x_B", "V", "c_a1"]
        assert float(rows[0]["c_a1"]) == pytest.approx(73.5)
        assert float(rows[-1]["V"]) < float(rows[0]["V"])

    def test_conjugate_functional(self, tmp_path):
        realized = tmp_path / "realized.crn"
        runner.invoke(app, ["realize", REFERENCE, "--Q", "2,3", "--output", str(realized)])
        out = tmp_path / "verify.csv"
        result = runner.invoke(app, [
            "verify", str(realized), "--history", "const:8,3", "--t-end", "2",
            "--sample-every", "0.5", "--q", "2,3", "--dcb", REFERENCE, "--conserved",
            "--output", str(out),
        ])
        assert result.exit_code == ExitCode.OK, result.output
        assert list(read_rows(out)[0]) == ["t", "x_A", "x_B", "V_L", "h_a1"]

    def test_increasing_functional_fails(self, tmp_path):
        result = runner.invoke(app, [
            "verify", TRIANGLE, "--history", "const:2,0.5", "--t-end", "2",
            "--sample-every", "0.25", "--lyapunov", "ref=2,0.5",
            "--output", str(tmp_path / "verify.csv"),
        ])
        assert result.exit_code == ExitCode.CERTIFICATE_FAILED

    def test_missing_reference(self, tmp_path):
        result = runner.invoke(app, [
            "verify", CANDIDATE, "--history", "const:5,1", "--t-end", "1",
            "--output", str(tmp_path / "verify.csv"),
        ])
        assert result.exit_code == ExitCode.ANALYSIS_ERROR

    def test_q_needs_dcb(self):
        result = runner.invoke(app, [
            "verify", CANDIDATE, "--history", "const:5,1", "--q", "2,1"
        ])
        assert result.exit_code == 2  # noqa: PLR2004
