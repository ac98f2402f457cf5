import csv
import io
import json
import math
import subprocess
import sys

import pytest

from conftest import XI
from isocauchy import asymptotics as asy
from isocauchy import correlated as corr
from isocauchy.cli import HEADERS, SweepSpec, UsageError, main
from isocauchy.divergence import kl_gaussian_to_cauchy
from isocauchy.exact import Priors, bayes_error, false_alarm, miss
from isocauchy.lrt import DetectorConfig


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def parse(text):
    return list(csv.reader(io.StringIO(text)))


SMALL = {
    "bayes-curve": ["--n-min", "11", "--n-max", "15"],
    "np-case1": ["--n-min", "11", "--n-max", "13"],
    "np-case2": ["--n-min", "50", "--n-max", "56", "--n-step", "3"],
    "kl-curve": ["--n-min", "2", "--n-max", "6"],
    "corr": ["--example", "2", "--n-min", "3", "--n-max", "8", "--trials", "1000", "--seed", "4"],
}


@pytest.mark.parametrize("command", sorted(SMALL))
class TestSweeps:
    def test_header(self, capsys, command):
        code, out, _ = run(capsys, command, *SMALL[command])
        assert code == 0
        rows = parse(out)
        assert rows[0] == HEADERS[command]
        assert len(rows) > 1 and all(len(r) == len(rows[0]) for r in rows)

    def test_deterministic(self, capsys, command):
        _, a, _ = run(capsys, command, *SMALL[command])
        _, b, _ = run(capsys, command, *SMALL[command])
        assert a == b

    def test_svg_does_not_change_csv(self, capsys, tmp_path, command):
        _, plain, _ = run(capsys, command, *SMALL[command])
        svg = tmp_path / "plot.svg"
        out = tmp_path / "t.csv"
        assert main([command, *SMALL[command], "--svg", str(svg), "--out", str(out)]) == 0
        assert out.read_text(encoding="utf-8") == plain
        assert svg.read_text().lstrip().startswith("<?xml")
        first = svg.read_bytes()
        main([command, *SMALL[command], "--svg", str(svg), "--out", str(out)])
        assert svg.read_bytes() == first


class TestLibraryEquality:
    def test_bayes_curve(self, capsys):
        _, out, _ = run(capsys, "bayes-curve", "--n-min", "20", "--n-max", "20", "--priors", "1")
        row = parse(out)[1]
        pri = Priors.from_eta_tilde(1.0)
        assert float(row[2]) == bayes_error(pri, 20, XI)[1]
        assert float(row[3]) == asy.thm1_as_stated(pri, 20, XI).pe_asymp
        assert float(row[4]) == asy.bayes_asymptotic_consistent(pri, 20, XI).pe_asymp

    def test_default_priors_grid(self, capsys):
        _, out, _ = run(capsys, "bayes-curve", "--n-min", "11", "--n-max", "11")
        assert [float(r[1]) for r in parse(out)[1:]] == [0.5, 1.0, 1.5]

    def test_np_case1(self, capsys):
        _, out, _ = run(capsys, "np-case1", "--n-min", "40", "--n-max", "40", "--eps", "0.05")
        row = parse(out)[1]
        le = asy.calibrate_threshold_for_pf(0.05, 40, XI)
        assert float(row[2]) == miss(DetectorConfig(40, XI, le))
        assert float(row[3]) == asy.case1_miss_approx(0.05, 40, XI)

    def test_np_case2(self, capsys):
        _, out, _ = run(capsys, "np-case2", "--n-min", "60", "--n-max", "80", "--n-step", "20", "--eps", "0.14")
        row = parse(out)[1]
        le = asy.calibrate_threshold_for_miss(0.14, 60, XI)
        assert float(row[2]) == le
        assert float(row[3]) == -math.log(false_alarm(DetectorConfig(60, XI, le)))
        b = asy.case2_exponent_bounds(asy.estimate_case2_kappa(0.14, 80, XI), 80)
        assert float(row[4]) == b.lower_rate * 60 and float(row[5]) == b.upper_rate * 60

    def test_kl_curve(self, capsys):
        _, out, _ = run(capsys, "kl-curve", "--n-min", "20", "--n-max", "20")
        row = parse(out)[1]
        rep = kl_gaussian_to_cauchy(20, XI)
        assert float(row[1]) == rep.d_exact and float(row[2]) == 0.5 * math.log(20)

    @pytest.mark.parametrize("example", ["1", "2", "3"])
    def test_corr(self, capsys, example):
        _, out, _ = run(capsys, "corr", "--example", example, "--n-min", "10", "--n-max", "10")
        row = parse(out)[1]
        ex = {"1": corr.ex1_closed_form(10, 0.5), "2": corr.ex2_errors(10), "3": corr.ex3_errors(10)}[example]
        assert (float(row[2]), float(row[3])) == (ex.p_false_alarm, ex.p_miss)
        assert math.isnan(float(row[4]))

    def test_corr_simulation_column(self, capsys):
        _, out, _ = run(capsys, "corr", "--example", "3", "--n-min", "100", "--n-max", "100", "--trials", "20000", "--seed", "9")
        row = parse(out)[1]
        assert abs(float(row[5]) - 0.1) <= 4 * math.sqrt(0.09 / 20000)


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["bayes-curve", "--n-min", "10", "--n-max", "5"],
            ["bayes-curve", "--xi", "-1"],
            ["bayes-curve", "--priors", "0,1"],
            ["bayes-curve", "--priors", "abc"],
            ["np-case1", "--eps", "1.5", "--n-max", "12"],
            ["bayes-curve", "--n-step", "0"],
            ["corr", "--example", "1", "--alpha", "1.0"],
        ],
    )
    def test_usage_exit_code(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2 and "error" in err and out == ""

    def test_domain_error_leaves_no_file(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        # at xi = 0.5 the ratio has no interior peak until n > 7
        assert main(["np-case1", "--xi", "0.5", "--n-min", "1", "--n-max", "3", "--out", str(out)]) == 2
        assert not out.exists()

    def test_argparse_errors(self):
        with pytest.raises(SystemExit) as exc:
            main(["corr"])
        assert exc.value.code == 2

    def test_spec_validation(self):
        with pytest.raises(UsageError):
            SweepSpec(0, 5, 1, XI)
        assert list(SweepSpec(3, 9, 3, XI).ns) == [3, 6, 9]


class TestValidate:
    def test_report(self, capsys, tmp_path):
        path = tmp_path / "v.json"
        code = main(["validate", "--seed", "1", "--trials", "20000", "--out", str(path)])
        err = capsys.readouterr().err
        rep = json.loads(path.read_text())
        assert code == (0 if rep["passed"] else 1)
        names = [c["name"] for c in rep["checks"]]
        assert len(names) == 10 and len(set(names)) == 10
        assert all(isinstance(c["passed"], bool) for c in rep["checks"])
        assert err.count("PASS") + err.count("FAIL") == 10

    def test_bad_trials(self, capsys):
        assert run(capsys, "validate", "--trials", "0")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "isocauchy", "kl-curve", "--n-min", "2", "--n-max", "3"], capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[0] == ",".join(HEADERS["kl-curve"])
