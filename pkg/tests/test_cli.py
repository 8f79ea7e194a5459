import io
import json

import pytest

from polydyn.cli import Config, run_command, to_json
from polydyn.experiments import COLUMNS


def run(argv):
    out = io.StringIO()
    code = run_command(argv, stdout=out)
    return code, out.getvalue()


def test_lyapunov_matches_library():
    from polydyn.lyapunov import lyap_przytycki
    from polydyn.poly import RationalPoly

    code, out = run(["lyapunov", "--poly", "z^2-6", "--method", "przytycki"])
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"value", "error_bound", "method"}
    assert data["value"] == lyap_przytycki(RationalPoly((1, 0, -6))).value


def test_spectrum_of_z2():
    code, out = run(["spectrum", "--poly", "z^2", "--n", "2"])
    lengths = sorted(json.loads(out)["lengths"])
    assert code == 0 and lengths == pytest.approx([0, 0, 4, 4, 4], abs=1e-12)
    code, out = run(["spectrum", "--poly", "z^2", "--n", "2", "--output", "csv"])
    assert out.splitlines()[0] == "index,length,period"


@pytest.mark.parametrize(
    "argv",
    [
        ["green", "--poly", "z^2-6", "--point", "0"],
        ["green", "--poly", "z^2-6", "--point", "0", "--precision-bits", "200"],
        ["bottcher", "--poly", "z^2+1/4", "--order", "5", "--point", "10"],
        ["height", "--poly", "z^2", "--point", "1/2"],
        ["crit-height", "--poly", "z^2+2"],
        ["connectivity", "--poly", "z^2+1"],
        ["intertwine-demo"],
        ["solve-unicritical", "--L0", "1.0"],
        ["lyapunov", "--poly", "z^2-6", "--method", "ergodic", "--samples", "2000", "--seed", "4"],
        ["lyapunov", "--poly", "z^2-6", "--method", "spectral", "--n", "6", "--output", "text"],
    ],
)
def test_commands_are_deterministic(argv):
    code1, out1 = run(argv)
    code2, out2 = run(argv)
    assert code1 == 0 and out1 == out2 and out1


def test_exit_codes(capsys):
    assert run(["green", "--poly", "z^2+", "--point", "0"])[0] == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "PARSE_ERROR"
    assert run(["crit-height", "--poly", "z^3-3z^2+z+4"])[0] == 1
    assert json.loads(capsys.readouterr().err)["error"] == "IRRATIONAL_CRITICAL_POINTS"
    assert run(["nonsense"])[0] == 2
    assert run(["green", "--poly", "z^2", "--point", "0", "--tol", "-1"])[0] == 2
    assert run(["height", "--poly", "z^2", "--point", "1+i"])[0] == 2
    assert run(["bottcher", "--poly", "z^2-6", "--point", "0.1"])[0] == 1


def test_json_float_format():
    assert to_json({"b": 0.1, "a": [1, 2.5, 1j]}) == '{"a": [1, 2.5, [0, 1]], "b": 0.10000000000000001}'


def test_config_validation():
    with pytest.raises(ValueError):
        Config(precision_bits=32)
    with pytest.raises(ValueError):
        Config(budget=0)


def test_experiments_subset(tmp_path):
    path = tmp_path / "acceptance.csv"
    code, out = run(["experiments", "--suite", "acceptance", "--only", "1,11", "--out", str(path), "--output", "csv"])
    assert code == 0
    header = path.read_text().splitlines()[0]
    assert header == ",".join(COLUMNS)
    assert out == path.read_text()
