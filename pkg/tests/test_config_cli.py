import pytest

from nullheat import ConfigError, format_config, parse_config, write_grid_kernel
from nullheat import cli

MINIMAL = """\
domain.length = 1.0
domain.omega_lo = 0.3
domain.omega_hi = 0.8
kernel.variant = zero
truncation.n = 4
time.horizon = 0.5
"""

SCALAR_FULL_WINDOW = """\
domain.length = 1.0
domain.omega_lo = 0.0
domain.omega_hi = 1.0
kernel.variant = zero
truncation.n = 1
time.horizon = 0.1
"""


def write(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestParseConfig:
    def test_minimal_with_defaults(self, tmp_path):
        cfg = parse_config(write(tmp_path, MINIMAL))
        assert cfg.kernel_variant == "zero"
        assert cfg.n_modes == 4
        assert cfg.horizon == 0.5
        assert cfg.nt == 64              # default applied
        assert cfg.gate == 1e-14
        assert cfg.seed == 20260809

    def test_echo_byte_identical_on_reparse(self, tmp_path):
        cfg = parse_config(write(tmp_path, MINIMAL))
        echo = format_config(cfg)
        echo_path = write(tmp_path, echo, "echo.cfg")
        cfg2 = parse_config(echo_path)
        assert format_config(cfg2) == echo

    def test_unknown_key_with_line(self, tmp_path):
        path = write(tmp_path, MINIMAL + "physics.viscosity = 2\n")
        with pytest.raises(ConfigError) as err:
            parse_config(path)
        assert "physics.viscosity" in str(err.value)
        assert err.value.line == 7

    def test_duplicate_key_with_line(self, tmp_path):
        path = write(tmp_path, MINIMAL + "truncation.n = 8\n")
        with pytest.raises(ConfigError) as err:
            parse_config(path)
        assert "duplicate" in str(err.value)
        assert err.value.line == 7

    def test_type_mismatch_with_line(self, tmp_path):
        path = write(tmp_path, MINIMAL.replace("truncation.n = 4", "truncation.n = four"))
        with pytest.raises(ConfigError) as err:
            parse_config(path)
        assert err.value.line == 5

    def test_missing_required_key(self, tmp_path):
        path = write(tmp_path, "domain.length = 1.0\n")
        with pytest.raises(ConfigError) as err:
            parse_config(path)
        assert "missing required key" in str(err.value)

    def test_missing_variant_parameter(self, tmp_path):
        path = write(tmp_path, MINIMAL.replace("kernel.variant = zero",
                                               "kernel.variant = gaussian"))
        with pytest.raises(ConfigError) as err:
            parse_config(path)
        assert "kernel.amplitude" in str(err.value)

    def test_irrelevant_parameter_rejected(self, tmp_path):
        path = write(tmp_path, MINIMAL + "kernel.width = 0.2\n")
        with pytest.raises(ConfigError):
            parse_config(path)

    def test_override_precedence(self, tmp_path):
        path = write(tmp_path, MINIMAL)
        cfg = parse_config(path, overrides={"time.horizon": "0.1"})
        assert cfg.horizon == 0.1
        assert "time.horizon = 0.1" in format_config(cfg)

    def test_grid_length_mismatch_names_both(self, tmp_path):
        grid = tmp_path / "grid.txt"
        write_grid_kernel(grid, lambda x, xi: x + xi, n=8, length=2.0)
        text = MINIMAL.replace("kernel.variant = zero",
                               f"kernel.variant = grid\nkernel.file = {grid}")
        cfg = parse_config(write(tmp_path, text))
        with pytest.raises(ConfigError) as err:
            cfg.kernel()
        assert "2.0" in str(err.value) and "1.0" in str(err.value)

    def test_comments_and_blank_lines(self, tmp_path):
        text = "# leading comment\n\n" + MINIMAL + "\n# trailing\n"
        cfg = parse_config(write(tmp_path, text))
        assert cfg.n_modes == 4


class TestRunCommand:
    def test_cost_scalar_value(self, tmp_path):
        path = write(tmp_path, SCALAR_FULL_WINDOW)
        out = tmp_path / "out"
        rc = cli.main(["cost", str(path), "--output", str(out)])
        assert rc == 0
        lines = (out / "cost.csv").read_text().splitlines()
        assert lines[0] == "T,N_used,kappa_T,gramian_min_eig,fit_model,fit_C,fit_alpha,fit_residual"
        kappa = float(lines[1].split(",")[2])
        assert kappa == pytest.approx(3.18434, abs=1e-4)

    def test_obs_sweep_full_window_all_ones(self, tmp_path):
        text = SCALAR_FULL_WINDOW.replace("truncation.n = 1", "truncation.n = 8")
        text += "sweep.r_list = 12.0,40.0,90.0,160.0,400.0\n"
        path = write(tmp_path, text)
        out = tmp_path / "out"
        rc = cli.main(["obs-sweep", str(path), "--output", str(out)])
        assert rc == 0
        lines = (out / "obs-sweep.csv").read_text().splitlines()
        assert lines[0] == "r,n_modes,c_min,specobs_constant"
        for line in lines[1:]:
            c_min = float(line.split(",")[2])
            assert c_min == pytest.approx(1.0, abs=1e-12)

    def test_echo_written_and_reparses(self, tmp_path):
        path = write(tmp_path, MINIMAL)
        out = tmp_path / "out"
        rc = cli.main(["basis", str(path), "--output", str(out)])
        assert rc == 0
        echo = out / "config.echo.cfg"
        cfg = parse_config(echo)
        assert format_config(cfg) == echo.read_text()

    def test_override_T_lands_in_echo(self, tmp_path):
        path = write(tmp_path, MINIMAL)
        out = tmp_path / "out"
        rc = cli.main(["evolve", str(path), "--T", "0.1", "--output", str(out)])
        assert rc == 0
        assert "time.horizon = 0.1" in (out / "config.echo.cfg").read_text()

    def test_control_hum_summary_schema(self, tmp_path):
        text = MINIMAL.replace("truncation.n = 4", "truncation.n = 8")
        path = write(tmp_path, text)
        out = tmp_path / "out"
        rc = cli.main(["control-hum", str(path), "--output", str(out)])
        assert rc == 0
        lines = (out / "control-summary.csv").read_text().splitlines()
        assert lines[0] == "T,cost_sq,terminal_residual,kappa_T,nullcond_ok"
        fields = lines[1].split(",")
        assert fields[4] == "1"
        assert float(fields[2]) <= 1e-8
        ctrl = (out / "control.csv").read_text().splitlines()
        assert ctrl[0] == "t,cost_density,residual_projection"
        assert len(ctrl) == 1 + 64

    def test_control_lr_schema(self, tmp_path):
        text = MINIMAL.replace("truncation.n = 4", "truncation.n = 16")
        text = text.replace("time.horizon = 0.5", "time.horizon = 1.0")
        text += "control.u0 = 0.5,0.5,0.5,0.5\ncontrol.stages = 3\n"
        path = write(tmp_path, text)
        out = tmp_path / "out"
        rc = cli.main(["control-lr", str(path), "--output", str(out)])
        assert rc == 0
        lines = (out / "lr.csv").read_text().splitlines()
        assert lines[0] == "k,r_k,t_start,t_mid,t_end,residual_after_active,residual_after_passive"
        assert len(lines) == 1 + 3

    def test_cost_sweep_schema_and_fit_rows(self, tmp_path):
        text = MINIMAL + "time.horizon_list = 0.4,0.2,0.1\n"
        text = text.replace("truncation.n = 4", "truncation.n = 6")
        path = write(tmp_path, text)
        out = tmp_path / "out"
        rc = cli.main(["cost-sweep", str(path), "--output", str(out)])
        assert rc == 0
        lines = (out / "cost-sweep.csv").read_text().splitlines()
        assert lines[0] == "T,N_used,kappa_T,gramian_min_eig,fit_model,fit_C,fit_alpha,fit_residual"
        models = [line.split(",")[4] for line in lines[1:]]
        assert models.count("sqrt") == 1 and models.count("inv") == 1

    def test_exit_code_domain_error(self, tmp_path):
        path = write(tmp_path, MINIMAL + "nonsense.key = 1\n")
        assert cli.main(["basis", str(path)]) == 1

    def test_exit_code_missing_file(self, tmp_path):
        assert cli.main(["basis", str(tmp_path / "absent.cfg")]) == 1

    def test_exit_code_conditioning_error(self, tmp_path):
        text = MINIMAL.replace("truncation.n = 4", "truncation.n = 32")
        path = write(tmp_path, text)
        out = tmp_path / "out"
        rc = cli.main(["zeta", str(path), "--T", "0.1", "--output", str(out)])
        assert rc == 2

    def test_unknown_verb_rejected(self, tmp_path):
        path = write(tmp_path, MINIMAL)
        with pytest.raises(SystemExit):
            cli.main(["transmogrify", str(path)])


class TestDeterminism:
    def test_repeated_run_byte_identical(self, tmp_path):
        text = MINIMAL + "seeds.oracle = 777\n"
        text = text.replace("truncation.n = 4", "truncation.n = 6")
        path = write(tmp_path, text)
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            rc = cli.main(["cost", str(path), "--output", str(out)])
            assert rc == 0
            outs.append((out / "cost.csv").read_bytes())
        assert outs[0] == outs[1]
