import json

import numpy as np
import pytest
from click.testing import CliRunner

from hardypursuit import (
    BoundaryFunction,
    DiscFunction,
    KernelParam,
    MalformedInputError,
    szego,
)
from hardypursuit.cli import cli, emit, ingest

from conftest import kernel_combination, polar_grid_point


@pytest.fixture
def runner():
    return CliRunner()


def write_disc(path, F):
    path.write_text(json.dumps(F.to_json_dict()))
    return str(path)


class TestIngest:
    def test_disc_document(self, tmp_path):
        F = szego(KernelParam(0.3), 16)
        got = ingest(write_disc(tmp_path / "f.json", F))
        assert isinstance(got, DiscFunction)
        np.testing.assert_array_equal(got.coeffs, F.coeffs)

    def test_boundary_document(self, tmp_path):
        f = BoundaryFunction.from_range(-2, [1.0, 0.0, 2.0, 3.0])
        p = tmp_path / "f.json"
        p.write_text(json.dumps(f.to_json_dict()))
        got = ingest(p)
        assert isinstance(got, BoundaryFunction)
        np.testing.assert_array_equal(got.coeffs, f.coeffs)

    def test_cosine_samples(self, tmp_path):
        # 2 cos t sampled at 64 points: one unit line at each of k = +-1
        t = 2 * np.pi * np.arange(64) / 64
        lines = "\n".join(f"{float(v)!r},0.0" for v in 2 * np.cos(t))
        p = tmp_path / "samples.csv"
        p.write_text(lines)
        got = ingest(p)
        assert isinstance(got, BoundaryFunction)
        assert got.coefficient(1) == pytest.approx(1.0, abs=1e-12)
        assert got.coefficient(-1) == pytest.approx(1.0, abs=1e-12)
        rest = got.norm2() - abs(got.coefficient(1)) ** 2 - abs(got.coefficient(-1)) ** 2
        assert abs(rest) <= 1e-12

    def test_sample_bandlimit(self, tmp_path):
        p = tmp_path / "samples.csv"
        p.write_text("\n".join("1.0" for _ in range(16)))
        got = ingest(p)
        assert got.trunc == 16 // 2 - 1

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(MalformedInputError):
            ingest(p)

    def test_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"type": "disc"}')
        with pytest.raises(MalformedInputError):
            ingest(p)

    def test_non_numeric_samples(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1.0,0.0\nfoo,0.0\n")
        with pytest.raises(MalformedInputError):
            ingest(p)

    def test_round_trip_bit_exact(self, tmp_path, rng):
        F = DiscFunction(rng.standard_normal(9) + 1j * rng.standard_normal(9))
        first = tmp_path / "a.json"
        first.write_text(emit(F))
        loaded = ingest(first)
        np.testing.assert_array_equal(loaded.coeffs, F.coeffs)
        second = tmp_path / "b.json"
        second.write_text(emit(loaded))
        assert first.read_bytes() == second.read_bytes()


class TestSubcommands:
    def test_expand_writes_json_csv_figures(self, runner, tmp_path):
        # two-atom input: two CSV rows and a negligible final residual
        F = kernel_combination([polar_grid_point(47, 0), polar_grid_point(54, 43)], [2.0, 2e-3])
        inp = write_disc(tmp_path / "f.json", F)
        out = tmp_path / "res.json"
        r = runner.invoke(
            cli,
            ["expand", "--input", inp, "--output", str(out), "--max-terms", "2", "--tol-residual", "0.0"],
        )
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        assert doc["subcommand"] == "expand"
        assert len(doc["expansion"]["coefficients"]) == 2
        assert doc["expansion"]["residual_norms"][-1] <= 1e-9 * F.norm()
        csv_text = (tmp_path / "res.csv").read_text().splitlines()
        assert csv_text[0] == "n,q_re,q_im,order,coeff_re,coeff_im,coeff_abs,residual"
        assert len(csv_text) == 3
        assert (tmp_path / "res_residual.png").exists()
        assert (tmp_path / "res_params.png").exists()

    def test_weak_mode_without_rho_is_usage_error(self, runner, tmp_path):
        inp = write_disc(tmp_path / "f.json", szego(KernelParam(0.0)))
        r = runner.invoke(cli, ["expand", "--input", inp, "--mode", "weak"])
        assert r.exit_code == 2
        assert "rho" in r.output

    def test_expand_determinism(self, runner, tmp_path):
        F = kernel_combination([0.2 + 0.1j, -0.4j], [1.0, 0.5])
        inp = write_disc(tmp_path / "f.json", F)
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            r = runner.invoke(
                cli,
                ["expand", "--input", inp, "--output", str(out), "--max-terms", "6", "--no-figures"],
            )
            assert r.exit_code == 0, r.output
            outs.append(out)
        assert outs[0].read_bytes() == outs[1].read_bytes()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_expand_rejects_boundary_input(self, runner, tmp_path):
        f = BoundaryFunction.from_range(-1, [1.0, 2.0])
        p = tmp_path / "f.json"
        p.write_text(json.dumps(f.to_json_dict()))
        r = runner.invoke(cli, ["expand", "--input", str(p), "--output", str(tmp_path / "o.json")])
        assert r.exit_code == 3
        err = json.loads(r.output.strip().splitlines()[-1])
        assert err["error"]["type"] == "MalformedInputError"

    def test_invert_output(self, runner, tmp_path):
        F = szego(KernelParam(0.0))
        inp = write_disc(tmp_path / "f.json", F)
        out = tmp_path / "res.json"
        r = runner.invoke(
            cli, ["invert", "--input", inp, "--output", str(out), "--max-terms", "4", "--no-figures"]
        )
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        inv = doc["result"]["inverse"]
        assert inv["type"] == "boundary"
        mid = -inv["min_k"]
        assert inv["coeffs"][mid] == [1.0, 0.0]

    def test_pseudo_invert_negative_frequency_signal(self, runner, tmp_path):
        f = BoundaryFunction.from_range(-3, [1.0, 2.0, 0.0])
        p = tmp_path / "f.json"
        p.write_text(json.dumps(f.to_json_dict()))
        out = tmp_path / "res.json"
        r = runner.invoke(cli, ["pseudo-invert", "--input", str(p), "--output", str(out), "--no-figures"])
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        assert doc["result"]["defect"] == pytest.approx(f.norm())
        assert doc["result"]["coefficients"] == []

    def test_basis_subcommand(self, runner, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps([[0.0, 0.0], [0.5, 0.0]]))
        F = szego(KernelParam(0.5))
        inp = write_disc(tmp_path / "f.json", F)
        out = tmp_path / "res.json"
        r = runner.invoke(
            cli, ["basis", "--plan-file", str(plan), "--input", inp, "--output", str(out)]
        )
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        inv = doc["inverse"]
        mid = -inv["min_k"]
        got = np.array([c[0] + 1j * c[1] for c in inv["coeffs"][mid : mid + 4]])
        np.testing.assert_allclose(got, 0.5 ** np.arange(4), atol=1e-10)

    def test_basis_rejects_out_of_disc_plan(self, runner, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps([[2.0, 0.0]]))
        inp = write_disc(tmp_path / "f.json", szego(KernelParam(0.0)))
        r = runner.invoke(cli, ["basis", "--plan-file", str(plan), "--input", inp])
        assert r.exit_code == 4

    def test_verify_subcommand(self, runner, tmp_path):
        out = tmp_path / "report.json"
        r = runner.invoke(cli, ["verify", "--trials", "5", "--output", str(out)])
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        assert doc["all_passed"] is True

    def test_config_file_merging(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"max_terms": 1, "refine_steps": 0}))
        F = kernel_combination([0.2 + 0.1j, -0.4j], [1.0, 0.5])
        inp = write_disc(tmp_path / "f.json", F)
        out = tmp_path / "res.json"
        r = runner.invoke(
            cli,
            ["expand", "--input", inp, "--output", str(out), "--config", str(cfg), "--no-figures"],
        )
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        assert doc["settings"]["max_terms"] == 1
        # explicit flag beats the config file
        r = runner.invoke(
            cli,
            [
                "expand", "--input", inp, "--output", str(out), "--config", str(cfg),
                "--max-terms", "3", "--no-figures",
            ],
        )
        doc = json.loads(out.read_text())
        assert doc["settings"]["max_terms"] == 3

    def test_env_var_override(self, runner, tmp_path):
        F = kernel_combination([0.2 + 0.1j], [1.0])
        inp = write_disc(tmp_path / "f.json", F)
        out = tmp_path / "res.json"
        r = runner.invoke(
            cli,
            ["expand", "--input", inp, "--output", str(out), "--no-figures"],
            env={"HARDYPURSUIT_EXPAND_MAX_TERMS": "2"},
            auto_envvar_prefix="HARDYPURSUIT",
        )
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        assert doc["settings"]["max_terms"] == 2

    def test_missing_input_file(self, runner, tmp_path):
        r = runner.invoke(cli, ["expand", "--input", str(tmp_path / "nope.json")])
        assert r.exit_code == 3
