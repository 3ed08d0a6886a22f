import pytest

from vacent.config import ConfigError, RunConfig, parse_config
from vacent.scenarios import AcceleratedSpec, InertialSpec, SweepAxis

FIG2A = """\
# single curve of the separation figure
scenario = a
omega = 4.6
lambda = 1.5
t = 1
sweep {
  param = separation
  from = 0
  to = 2.733
  steps = 200
}
out = fig2a_a.csv
"""


def error_key(text):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    return info.value.key


class TestParse:
    def test_fig2a_config(self):
        cfg = parse_config(FIG2A)
        assert cfg.scenario == "a"
        assert cfg.params == {"omega": 4.6, "lambda": 1.5, "t": 1.0}
        assert cfg.sweeps == (SweepAxis("separation", 0.0, 2.733, 200),)
        assert cfg.out == "fig2a_a.csv"
        assert cfg.spec() == InertialSpec("a", 4.6, 1.5, 1.0, 0.0)

    def test_one_line_sweep_and_comments(self):
        cfg = parse_config(
            "scenario = d  # gap\nomega=2.3\nlambda=1.2\nt=1\n"
            "sweep { param = T, from = 0, to = 5.46, steps = 11 }\n"
        )
        assert cfg.sweeps[0] == SweepAxis("T", 0.0, 5.46, 11)
        assert cfg.spec().T == 0.0

    def test_two_axes(self):
        cfg = parse_config(
            "scenario = accelerated\nomega = 2\nlambda = 0.5\nt = 1\nr = 1\n"
            "sweep { param = omega, from = 0.5, to = 10, steps = 5 }\n"
            "sweep { param = lambda, from = 0, to = 5, steps = 5 }\n"
        )
        assert [ax.param for ax in cfg.sweeps] == ["omega", "lambda"]
        assert cfg.spec() == AcceleratedSpec(2.0, 0.5, 1.0, r=1.0)

    def test_acceleration_params(self):
        cfg = parse_config("scenario = accelerated\nOmega = 2\na = 3\nlambda = 0.5\nt = 1\n")
        spec = cfg.spec()
        assert spec.omega == 2.0 and spec.Omega == 2.0 and spec.a == 3.0

    def test_round_trip(self):
        cfg = parse_config(FIG2A)
        assert parse_config(cfg.to_text()) == cfg


class TestErrors:
    def test_missing_T(self):
        assert error_key("scenario = d\nomega = 2\nlambda = 1\nt = 1\n") == "T"

    def test_ambiguous_squeezing(self):
        assert error_key("scenario = accelerated\nomega = 2\nlambda = 1\nt = 1\nr = 1\nOmega = 2\na = 1\n") == "r"

    def test_half_acceleration(self):
        assert error_key("scenario = accelerated\nomega = 2\nlambda = 1\nt = 1\nOmega = 2\n") == "a"

    def test_unknown_key(self):
        assert error_key("scenario = a\nomega = 2\nlambda = 1\nt = 1\ncolour = red\n") == "colour"

    def test_duplicate_key(self):
        assert error_key("scenario = a\nomega = 2\nomega = 3\nlambda = 1\nt = 1\n") == "omega"

    def test_key_not_valid_for_scenario(self):
        assert error_key("scenario = a\nomega = 2\nlambda = 1\nt = 1\ndelay = 1\n") == "delay"

    def test_sweep_invalid_param(self):
        assert error_key(
            "scenario = a\nomega = 2\nlambda = 1\nt = 1\nsweep { param = r, from = 0, to = 1, steps = 3 }\n"
        ) == "r"

    def test_too_many_axes(self):
        sweeps = "".join(
            f"sweep {{ param = {p}, from = 0.1, to = 1, steps = 2 }}\n" for p in ("omega", "lambda", "t")
        )
        assert error_key("scenario = a\n" + sweeps) == "sweep"

    def test_bad_number(self):
        assert error_key("scenario = a\nomega = fast\nlambda = 1\nt = 1\n") == "omega"

    def test_negative(self):
        assert error_key("scenario = a\nomega = 2\nlambda = -1\nt = 1\n") == "lambda"

    def test_unknown_scenario(self):
        assert error_key("scenario = z\n") == "scenario"

    def test_missing_scenario(self):
        assert error_key("omega = 2\n") == "scenario"

    def test_unterminated_sweep(self):
        assert error_key("scenario = a\nomega = 2\nlambda = 1\nt = 1\nsweep {\nparam = t\n") == "sweep"

    def test_sweep_steps(self):
        assert error_key(
            "scenario = a\nomega = 2\nlambda = 1\nt = 1\nsweep { param = t, from = 0, to = 1, steps = 1 }\n"
        ) == "steps"

    def test_omega_mismatch(self):
        assert error_key("scenario = accelerated\nomega = 2\nOmega = 3\na = 1\nlambda = 1\nt = 1\n") == "Omega"

    def test_no_pair_spec(self):
        cfg = parse_config("scenario = single-detector\nomega = 1\nlambda = 0.1\nt = 1\n")
        with pytest.raises(ConfigError):
            cfg.spec()


def test_config_is_value_object():
    assert RunConfig("a", {"omega": 1.0}) == RunConfig("a", {"omega": 1.0})
