import subprocess
import sys

import numpy as np
import pytest

from cdkernel.cli import main, run
from cdkernel.config import ExperimentConfig, parse_complex, parse_config, parse_symbol
from cdkernel.errors import ConfigError
from cdkernel.experiments import format_value, make_rng, run_lubinsky
from cdkernel.measure import gen_circle, save_measure


def write_config(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[1].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[2:]]
    return lines[0], header, rows


CIRCLE8 = """
[measure]
generator = circle
m = 8
[experiment]
k = 8
delta = 0.1
"""


class TestParsing:
    def test_defaults(self):
        cfg = parse_config("")
        assert cfg == ExperimentConfig()
        assert cfg.k == (8, 16, 32, 64) and cfg.moments == 6

    def test_full(self, tmp_path):
        save_measure(tmp_path / "nodes.csv", gen_circle(8))
        cfg = parse_config(
            """
            [measure]
            generator = file
            path = nodes.csv
            atoms = 1.5:0.1; -0.5+1i:0.2
            [weight]
            phi = gaussian(0.5)
            [experiment]
            k = 2, 4
            eps = 0.3
            y0 = 0.1-0.2j
            f = rational(1, 0, 1 / -3, 1)
            p = 1, 2, inf
            anchor = 0, 0.5i
            seed = 7
            """.replace("            ", ""),
            base_dir=str(tmp_path),
        )
        assert cfg.atoms == ((1.5 + 0j, 0.1), (-0.5 + 1j, 0.2))
        assert cfg.y0 == 0.1 - 0.2j and cfg.anchors == (0j, 0.5j)
        assert cfg.p == (1.0, 2.0, float("inf"))
        mu, phi = cfg.build_measure()
        assert len(mu) == 10 and mu.mass == pytest.approx(1.3)
        assert phi(np.array([2.0]))[0] == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "text",
        [
            "[bogus]\nx = 1\n",
            "[experiment]\nkk = 4\n",
            "[experiment]\nk = 8, 4\n",
            "[experiment]\nk =\n",
            "[experiment]\nk = 0, 4\n",
            "[experiment]\ndelta = -1\n",
            "[experiment]\nseed = -3\n",
            "[experiment]\nf = sin\n",
            "[experiment]\nk = four\n",
            "[measure]\ngenerator = file\n",
            "[measure]\ngenerator = file\npath = nope.csv\n",
            "[measure]\natoms = 1.5\n",
            "no section line\n",
        ],
    )
    def test_rejects(self, tmp_path, text):
        with pytest.raises(ConfigError):
            parse_config(text, str(tmp_path))

    def test_symbols(self):
        assert parse_symbol("z").degree == 1
        assert parse_symbol("re_z").real
        assert parse_symbol("const(3)")(np.array([1j]))[0] == 3
        assert parse_symbol("rational(0, 1)").degree == 1

    def test_complex(self):
        assert parse_complex(" -0.5 + 1i ") == -0.5 + 1j
        with pytest.raises(ConfigError):
            parse_complex("x")

    def test_digest_ignores_out(self):
        a = ExperimentConfig(out="a")
        assert a.digest() == ExperimentConfig(out="b").digest()
        assert a.digest() != a.with_seed(1).digest()


class TestHelpers:
    def test_format_value(self):
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value(3) == "3"
        assert format_value(None) == ""
        assert format_value(1 - 2j) == "1-2j"

    def test_rng_is_philox(self):
        assert isinstance(make_rng(5).bit_generator, np.random.Philox)
        assert make_rng(5).random() == make_rng(5).random()


class TestRunners:
    def test_localization_circle(self, tmp_path):
        path = run("localization", write_config(tmp_path, CIRCLE8), str(tmp_path / "out"))
        comment, header, rows = read_csv(tmp_path / "out" / "localization.csv")
        assert path.endswith("localization.csv")
        assert header == ["k", "offdiag_mass", "total_mass", "trace_identity_residual"]
        assert comment.startswith("# study=localization config_sha256=")
        assert abs(float(rows[0]["offdiag_mass"])) <= 1e-12
        assert float(rows[0]["total_mass"]) == pytest.approx(1.0, abs=1e-12)

    def test_localization_chebyshev_decreasing(self, tmp_path):
        cfg = write_config(tmp_path, "[experiment]\nk = 8, 16, 32, 64\ndelta = 0.5\n")
        run("localization", cfg, str(tmp_path))
        _, _, rows = read_csv(tmp_path / "localization.csv")
        masses = [float(r["offdiag_mass"]) for r in rows]
        assert all(a > b for a, b in zip(masses, masses[1:]))

    def test_forbidden(self, tmp_path):
        cfg = write_config(
            tmp_path, "[measure]\ngenerator = circle\nm = 64\n[experiment]\nk = 8, 16, 24, 32\neps = 0.25\n"
        )
        run("forbidden", cfg, str(tmp_path))
        _, header, rows = read_csv(tmp_path / "forbidden.csv")
        assert header[:3] == ["k", "m", "sup_partial_diag"]
        assert [r["slope_so_far"] == "" for r in rows] == [True, True, True, False]
        assert float(rows[-1]["slope_so_far"]) < 0
        for r in rows:
            assert float(r["partial_trace"]) == pytest.approx(int(r["k"]) - int(r["m"]), abs=1e-8)

    def test_toeplitz_constant(self, tmp_path):
        cfg = write_config(tmp_path, "[experiment]\nk = 4, 8\nf = const(3)\ng = const(3)\np = 1, 2\n")
        run("toeplitz", cfg, str(tmp_path))
        _, header, rows = read_csv(tmp_path / "toeplitz.csv")
        assert header[-1] == "moment_gap_6" and len(rows) == 4
        for r in rows:
            assert float(r["algebra_defect"]) <= 1e-12
            assert float(r["szego_residual"]) <= 1e-10

    def test_toeplitz_circle_decay(self, tmp_path):
        cfg = write_config(tmp_path, "[measure]\ngenerator = circle\nm = 256\n[experiment]\nk = 8, 64\n")
        run("toeplitz", cfg, str(tmp_path))
        _, _, rows = read_csv(tmp_path / "toeplitz.csv")
        d8, d64 = (float(r["algebra_defect"]) for r in rows)
        assert d64 <= d8 / 4

    def test_lubinsky_rows(self):
        cfg = ExperimentConfig(generator="circle", m=32, k=(4, 8, 16), trials=40, seed=3)
        table = run_lubinsky(cfg)
        assert len(table.rows) == 40
        assert table.column("k") == sorted(table.column("k"))
        assert min(table.column("margin")) >= -1e-9
        first = [r for r in table.rows if r[0] == 0][0]
        assert first[2] == 0.0 and abs(first[3]) <= 1e-12

    def test_skop(self, tmp_path):
        cfg = write_config(tmp_path, "[experiment]\nk = 8, 16, 32\n")
        run("skop", cfg, str(tmp_path))
        _, _, rows = read_csv(tmp_path / "skop.csv")
        for r in rows:
            assert float(r["rel_gap"]) <= 1e-8
            assert int(r["numerical_rank"]) <= int(r["rank_bound"]) == 1

    def test_skop_constant(self, tmp_path):
        cfg = write_config(tmp_path, "[experiment]\nk = 8\nf = const(2)\n")
        run("skop", cfg, str(tmp_path))
        _, _, rows = read_csv(tmp_path / "skop.csv")
        r = rows[0]
        assert float(r["hs_norm_sq"]) == 0 and float(r["kernel_l2"]) == 0
        assert r["numerical_rank"] == "0" and r["rank_bound"] == "0"

    def test_nevai(self, tmp_path):
        cfg = write_config(
            tmp_path, "[measure]\ngenerator = circle\nm = 8\n[experiment]\nk = 8\nanchor = 1\n"
        )
        run("nevai", cfg, str(tmp_path))
        _, _, rows = read_csv(tmp_path / "nevai.csv")
        assert float(rows[0]["mass_outside_r"]) <= 1e-12
        assert float(rows[0]["avg_vol_identity_residual"]) <= 1e-10


class TestExitCodes:
    def test_missing_measure_file(self, tmp_path, caplog):
        cfg = write_config(tmp_path, "[measure]\ngenerator = file\npath = missing.csv\n")
        assert main(["localization", "--config", str(cfg), "--out", str(tmp_path)]) == 2
        assert "missing.csv" in caplog.text

    def test_missing_config(self, tmp_path):
        assert main(["localization", "--config", str(tmp_path / "none.ini")]) == 2

    def test_eps_too_large(self, tmp_path):
        cfg = write_config(tmp_path, "[experiment]\nk = 2, 4\neps = 0.9\n")
        assert main(["forbidden", "--config", str(cfg), "--out", str(tmp_path)]) == 2

    def test_rank_deficient(self, tmp_path):
        cfg = write_config(tmp_path, "[measure]\ngenerator = circle\nm = 4\n[experiment]\nk = 8\n")
        assert main(["localization", "--config", str(cfg), "--out", str(tmp_path)]) == 3

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["nosuchstudy"])
        assert info.value.code == 2

    def test_bad_measure_row(self, tmp_path, caplog):
        (tmp_path / "bad.csv").write_text("# re,im,weight,phi\n1,0,1,0\n1,0,x,0\n")
        cfg = write_config(tmp_path, "[measure]\ngenerator = file\npath = bad.csv\n[experiment]\nk = 1\n")
        assert main(["localization", "--config", str(cfg), "--out", str(tmp_path)]) == 2
        assert "line 3" in caplog.text

    def test_success(self, tmp_path):
        cfg = write_config(tmp_path, CIRCLE8)
        assert main(["localization", "--config", str(cfg), "--out", str(tmp_path)]) == 0


class TestDeterminism:
    @pytest.mark.parametrize("study", ["lubinsky", "localization", "skop"])
    def test_byte_identical(self, tmp_path, study):
        cfg = write_config(
            tmp_path, "[measure]\ngenerator = circle\nm = 32\n[experiment]\nk = 4, 8\ntrials = 20\n"
        )
        run(study, cfg, str(tmp_path / "a"), seed=11)
        run(study, cfg, str(tmp_path / "b"), seed=11)
        a = (tmp_path / "a" / f"{study}.csv").read_bytes()
        assert a == (tmp_path / "b" / f"{study}.csv").read_bytes()
        assert b"seed=11" in a and b"\r" not in a

    def test_seed_changes_output(self, tmp_path):
        cfg = write_config(tmp_path, "[measure]\ngenerator = circle\nm = 32\n[experiment]\nk = 4, 8\ntrials = 20\n")
        run("lubinsky", cfg, str(tmp_path / "a"), seed=1)
        run("lubinsky", cfg, str(tmp_path / "b"), seed=2)
        assert (tmp_path / "a" / "lubinsky.csv").read_bytes() != (tmp_path / "b" / "lubinsky.csv").read_bytes()

    def test_module_entry_point(self, tmp_path):
        cfg = write_config(tmp_path, CIRCLE8)
        proc = subprocess.run(
            [sys.executable, "-m", "cdkernel", "localization", "--config", str(cfg), "--out", str(tmp_path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "localization.csv").exists()
