import pytest

from ergocert.cli import main
from ergocert.seqfile import read_sequence_file, write_sequence_file
from ergocert.stochastic import StochasticMatrix, identity_matrix

LAZY = StochasticMatrix([[0.9, 0.1], [0.1, 0.9]])
SWAP = StochasticMatrix([[0.0, 1.0], [1.0, 0.0]])


def report_lines(capsys):
    out = capsys.readouterr().out
    return dict(line.split(" = ", 1) for line in out.strip().splitlines() if " = " in line)


@pytest.fixture
def lazy_file(tmp_path):
    path = tmp_path / "lazy.seq"
    write_sequence_file(path, [LAZY] * 40)
    return str(path)


@pytest.fixture
def swap_file(tmp_path):
    path = tmp_path / "swap.seq"
    write_sequence_file(path, [SWAP] * 6)
    return str(path)


@pytest.fixture
def identity_file(tmp_path):
    path = tmp_path / "identity.seq"
    write_sequence_file(path, [identity_matrix(2)] * 5)
    return str(path)


class TestValidate:
    def test_well_formed(self, lazy_file, capsys):
        assert main(["validate", lazy_file]) == 0
        lines = report_lines(capsys)
        assert lines["input.n"] == "2"
        assert lines["input.length"] == "40"
        assert lines["input.alpha"] == "0.1"
        assert lines["validation"] == "ok"

    def test_bad_row_sum_names_record_and_row(self, tmp_path, capsys):
        path = tmp_path / "bad.seq"
        path.write_text("n=2\n1 0\n0 1\n\n0.5 0.6\n0.5 0.5\n")
        assert main(["validate", str(path)]) == 2
        err = capsys.readouterr().err
        assert "record 2" in err
        assert "row 1" in err

    def test_empty_body(self, tmp_path, capsys):
        path = tmp_path / "empty.seq"
        path.write_text("n=2\n")
        assert main(["validate", str(path)]) == 2
        assert "no matrices" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "absent.seq")]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_tolerance_flags(self, tmp_path):
        path = tmp_path / "neg.seq"
        path.write_text("n=2\n1.0 -1e-11\n0 1\n")
        assert main(["validate", str(path)]) == 2
        assert main(["validate", str(path), "--tol-neg", "1e-10"]) == 0


class TestAnalyze:
    def test_lazy_walk_holds(self, lazy_file, capsys):
        assert main(["analyze", lazy_file]) == 0
        lines = report_lines(capsys)
        assert lines["hypotheses.verdict"] == "all-conditions-hold"
        assert lines["hypotheses.core.present"] == "yes"
        assert lines["hypotheses.core.edges"] == "(1,1) (1,2) (2,1) (2,2)"
        assert lines["hypotheses.eventual_positivity.start_1"] == "1"

    def test_swaps_cite_missing_core(self, swap_file, capsys):
        assert main(["analyze", swap_file]) == 1
        lines = report_lines(capsys)
        assert lines["hypotheses.verdict"] == "conditions-violated"
        assert lines["hypotheses.violations"] == "aperiodic-core"
        assert lines["hypotheses.core.present"] == "no"
        assert lines["hypotheses.core.offending_nodes"] == "1 2"

    def test_triangular_factor_cited(self, tmp_path, capsys):
        path = tmp_path / "tri.seq"
        write_sequence_file(path, [LAZY, StochasticMatrix([[1.0, 0.0], [0.5, 0.5]]), LAZY])
        assert main(["analyze", str(path)]) == 1
        assert "complete-reducibility:k=2" in report_lines(capsys)["hypotheses.violations"]

    def test_all_starts(self, tmp_path, capsys):
        path = tmp_path / "mix.seq"
        write_sequence_file(path, [LAZY, identity_matrix(2)])
        assert main(["analyze", str(path), "--all-starts"]) == 1
        lines = report_lines(capsys)
        assert lines["hypotheses.eventual_positivity.start_1"] == "1"
        assert lines["hypotheses.eventual_positivity.start_2"] == "-"

    def test_report_is_stable(self, lazy_file, capsys):
        main(["analyze", lazy_file])
        first = capsys.readouterr().out
        main(["analyze", lazy_file])
        second = capsys.readouterr().out
        assert first == second


class TestCertify:
    def test_rank_one_certificate(self, tmp_path, capsys):
        path = tmp_path / "rank1.seq"
        write_sequence_file(path, [StochasticMatrix([[0.5, 0.5], [0.5, 0.5]])] * 3)
        assert main(["certify", str(path)]) == 0
        lines = report_lines(capsys)
        assert lines["certificate.status"] == "emitted"
        assert lines["certificate.contraction"] == "0.96875"
        assert lines["certificate.saturation_index"] == "1"
        assert lines["certificate.seminorm_at_saturation"] == "0.0"

    def test_swaps_refused(self, swap_file, capsys):
        assert main(["certify", swap_file]) == 1
        lines = report_lines(capsys)
        assert lines["certificate.status"] == "refused"
        assert "aperiodic-core" in lines["certificate.refusals"]

    def test_identity_exhausts_horizon(self, identity_file, capsys):
        assert main(["certify", identity_file]) == 3
        assert report_lines(capsys)["certificate.status"] == "horizon-exhausted"

    def test_alpha_override(self, lazy_file, capsys):
        assert main(["certify", lazy_file, "--alpha-override", "0.05"]) == 0
        assert report_lines(capsys)["certificate.alpha"] == "0.05"


class TestSimulate:
    def test_lazy_walk_stops_at_31(self, lazy_file, capsys):
        assert main(["simulate", lazy_file, "--epsilon", "1e-3"]) == 0
        lines = report_lines(capsys)
        assert lines["trajectory.k_final"] == "31"
        assert lines["trajectory.reached"] == "yes"
        row = [float(v) for v in lines["consensus.row"].split()]
        assert row == pytest.approx([0.5, 0.5], abs=1e-12)

    def test_constant_x0_exits_at_zero(self, lazy_file, capsys):
        assert main(["simulate", lazy_file, "--epsilon", "1e-3", "--x0", "2,2"]) == 0
        lines = report_lines(capsys)
        assert lines["trajectory.k_final"] == "0"
        assert lines["trajectory_x0.0"] == "0.0"
        assert lines["trajectory.criterion"] == "vector"

    def test_swaps_exhaust(self, swap_file, capsys):
        assert main(["simulate", swap_file, "--epsilon", "0.5"]) == 3
        lines = report_lines(capsys)
        assert lines["trajectory.reached"] == "no"
        assert lines["trajectory.6"] == "1.0"

    def test_csv_emission(self, lazy_file, tmp_path, capsys):
        csv_path = tmp_path / "traj.csv"
        assert main(["simulate", lazy_file, "--epsilon", "1e-3", "--emit-csv", str(csv_path)]) == 0
        rows = csv_path.read_text().strip().splitlines()
        assert rows[0] == "k,seminorm"
        assert rows[1] == "0,1.0"
        assert len(rows) == 33  # header + k = 0..31
        assert float(rows[-1].split(",")[1]) == pytest.approx(0.8**31)

    def test_x0_dimension_mismatch(self, lazy_file, capsys):
        assert main(["simulate", lazy_file, "--x0", "1,2,3"]) == 2

    def test_x0_from_file(self, lazy_file, tmp_path, capsys):
        vec = tmp_path / "x0.txt"
        vec.write_text("0.0 1.0\n")
        assert main(["simulate", lazy_file, "--epsilon", "1e-3", "--x0", f"@{vec}"]) == 0
        lines = report_lines(capsys)
        assert float(lines["trajectory_x0.0"]) == 0.5


class TestGenerate:
    def test_generate_then_validate(self, tmp_path, capsys):
        for preset in ("positive-diagonal", "cycle-core", "wolfowitz-set", "periodic-counterexample"):
            out = tmp_path / f"{preset}.seq"
            assert main(["generate", preset, "--n", "3", "--length", "20", "--alpha", "0.1",
                         "--seed", "1", "--out", str(out)]) == 0
            capsys.readouterr()
            assert main(["validate", str(out)]) == 0
            capsys.readouterr()

    def test_generated_metadata_round_trips(self, tmp_path, capsys):
        out = tmp_path / "w.seq"
        assert main(["generate", "wolfowitz-set", "--n", "3", "--length", "10",
                     "--alpha", "0.1", "--seed", "2", "--out", str(out)]) == 0
        capsys.readouterr()
        seqf = read_sequence_file(out)
        assert seqf.metadata["preset"] == "wolfowitz-set"
        assert seqf.metadata["checked-depth"] == "6"

    def test_seed_reproducibility_is_byte_exact(self, tmp_path, capsys):
        a, b = tmp_path / "a.seq", tmp_path / "b.seq"
        args = ["generate", "cycle-core", "--n", "4", "--length", "15", "--alpha", "0.1", "--seed", "7"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_bad_parameters(self, tmp_path, capsys):
        out = tmp_path / "x.seq"
        assert main(["generate", "cycle-core", "--n", "1", "--out", str(out)]) == 2
        assert main(["generate", "cycle-core", "--alpha", "0.9", "--out", str(out)]) == 2

    def test_analyze_verdicts_per_regime(self, tmp_path, capsys):
        for preset, n, length in [("positive-diagonal", 3, 12), ("cycle-core", 4, 30)]:
            good = tmp_path / f"{preset}.seq"
            main(["generate", preset, "--n", str(n), "--length", str(length), "--seed", "3",
                  "--out", str(good)])
            capsys.readouterr()
            assert main(["analyze", str(good)]) == 0
            capsys.readouterr()
        bad = tmp_path / "bad.seq"
        main(["generate", "periodic-counterexample", "--n", "4", "--length", "12", "--seed", "3",
              "--alpha", "0.25", "--out", str(bad)])
        capsys.readouterr()
        assert main(["analyze", str(bad)]) == 1
        assert "aperiodic-core" in report_lines(capsys)["hypotheses.violations"]
