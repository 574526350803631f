import io
import json

import pytest

from qhs.cli import config_from_args, main
from qhs.config import CommandConfig, ConfigError
from qhs.preset import default_data, dumps, mutate


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def mutated_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("presets") / "wedge-flip.toml"
    path.write_text(dumps(mutate(default_data(), ("wedge", "w10 w01"), "q^-2*vol")))
    return path


def test_validate_passes():
    code, text = run("validate", "podles-cp1")
    assert code == 0 and "overall: PASS" in text


def test_truncated_preset_is_an_input_error(tmp_path, capsys):
    src = dumps(default_data())
    path = tmp_path / "trunc.toml"
    path.write_text(src[: len(src) // 3] + '\n"unterminated = [\n')
    code, _ = run("validate", str(path))
    assert code == 2
    assert "line" in capsys.readouterr().err


def test_failing_preset(mutated_file, capsys):
    code, text = run("validate", str(mutated_file))
    assert code == 1 and "witness" in text
    code, _ = run("validate", str(mutated_file), "--force")
    assert code == 0
    assert "warning" in capsys.readouterr().err


def test_lc_on_mutated_preset_fails(mutated_file):
    code, _ = run("lc", str(mutated_file), "--lambda1", "1", "--lambda2", "q^2")
    assert code != 0


def test_metrics_json_is_exact():
    code, text = run("metrics", "podles-cp1", "--format", "json", "--samples", "3")
    data = json.loads(text)
    assert code == 0
    assert data["lambda_qsym"] == "-q^2"
    assert data["quantum_symmetric_ray"]["lambda2_over_lambda1"] == "q^2"
    assert all(isinstance(r["lambda1"], str) for r in data["scan"])


@pytest.mark.parametrize("l1, l2, real, qsym", [
    ("1", "q^2", True, True),
    ("i", "1", False, False),
    ("2", "3", True, False),
])
def test_metric_descriptor(l1, l2, real, qsym):
    code, text = run("metrics", "podles-cp1", "--lambda1", l1, "--lambda2", l2, "--format", "json",
                     "--samples", "1")
    m = json.loads(text)["metric"]
    assert code == 0
    assert (m["real"], m["quantum_symmetric"]) == (real, qsym)


def test_eval_columns():
    code, text = run("metrics", "podles-cp1", "--eval", "--q0", "1/3", "--format", "json", "--samples", "1")
    assert json.loads(text)["lambda_qsym_eval"] == {"1/3": "-1/9"}


def test_lc_rejects_non_real_before_assembly(capsys):
    code, _ = run("lc", "podles-cp1", "--lambda1", "i", "--lambda2", "1")
    assert code == 2
    assert "not real" in capsys.readouterr().err


def test_bad_lambda_is_an_input_error():
    assert run("lc", "podles-cp1", "--lambda1", "1", "--lambda2", "q^")[0] == 2
    assert run("lc", "podles-cp1", "--lambda1", "0", "--lambda2", "1")[0] == 2


def test_unknown_preset():
    assert run("validate", "no-such-preset")[0] == 2


def test_lc_qsym_passes():
    code, text = run("lc", "podles-cp1", "--lambda1", "1", "--lambda2", "q^2", "--degree", "2",
                     "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["report"]["ok"]
    assert data["sigma"]["matrix"][1][2] == "q^2"


def test_verify_metrics_suite():
    code, text = run("verify", "podles-cp1", "--suite", "metrics", "--format", "json")
    assert code == 0 and json.loads(text)["ok"]


def test_config_invariants():
    with pytest.raises(ConfigError):
        CommandConfig("verify", degree=0)
    with pytest.raises(ConfigError):
        CommandConfig("lc", lambda1="1")
    with pytest.raises(ConfigError):
        CommandConfig("metrics", lambda1="q^", lambda2="1")
    cfg = config_from_args(["verify", "podles-cp1", "--suite", "connection", "--degree", "3"])
    assert (cfg.suite, cfg.degree, cfg.fmt) == ("connection", 3, "text")
