"""CLI subcommands: JSON output, determinism, and exit codes."""
import json

from padicdyn.cli import run

STRICT = ["--p", "13", "--a", "170/1", "--b", "14/1"]


def invoke(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


class TestFixedPoints:
    def test_report(self, capsys):
        code, body = invoke(capsys, ["fixed-points", *STRICT])
        assert code == 0
        assert body["classifications"] == {
            "x0": "attracting", "x1": "repelling", "x2": "repelling"}
        assert all(body["lemma_3_4"].values())

    def test_deterministic(self, capsys):
        _, first = invoke(capsys, ["fixed-points", *STRICT])
        _, second = invoke(capsys, ["fixed-points", *STRICT])
        assert first == second

    def test_classify(self, capsys):
        code, body = invoke(capsys, ["fixed-points", *STRICT])
        digits = ",".join(str(d) for d in body["x0"]["digits"])
        code, body = invoke(capsys, ["classify", *STRICT, "--x", f"0;{digits}"])
        assert code == 0
        assert body["classification"] == "attracting"


class TestValidation:
    def test_a_outside_Ep_exits_1(self, capsys):
        code = run(["fixed-points", "--p", "13", "--a", "2/1", "--b", "14/1"])
        assert code == 1

    def test_bad_flags_exit_1(self, capsys):
        assert run(["fixed-points", "--p", "13", "--a", "14/1"]) == 1
        assert run(["no-such-command"]) == 1

    def test_composite_p_exits_1(self, capsys):
        assert run(["fixed-points", "--p", "12", "--a", "2/1", "--b", "3/1"]) == 1


class TestDynamics:
    def test_orbit(self, capsys):
        code, body = invoke(capsys, ["orbit", *STRICT, "--x", "1/1", "--steps", "3"])
        assert code == 0
        assert len(body["orbit"]) == 4

    def test_basin(self, capsys):
        code, body = invoke(capsys, ["basin", *STRICT, "--x", "1/1"])
        assert code == 0
        assert body == {"outcome": "in_basin", "steps": 0, "trail": []}

    def test_periodic_and_itinerary(self, capsys):
        code, body = invoke(capsys, ["periodic", *STRICT, "--word", "1,2"])
        assert code == 0
        assert body["period_residual"] == "0" or body["period_residual"].startswith("13^-")
        digits = ",".join(str(d) for d in body["point"]["digits"])
        code, body = invoke(capsys,
                            ["itinerary", *STRICT, "--x", f"0;{digits}",
                             "--length", "4"])
        assert code == 0
        assert body["itinerary"] == [1, 2, 1, 2]

    def test_periodic_non_strict_exits_1(self, capsys):
        code = run(["periodic", "--p", "13", "--a", "14/1", "--b", "14/1",
                    "--word", "1"])
        assert code == 1

    def test_cylinders(self, capsys):
        code, body = invoke(capsys, ["cylinders", *STRICT, "--depth", "2"])
        assert code == 0
        assert len(body["cylinders"]) == 4
        assert all(c["ball"]["radius_exponent"] == -2 for c in body["cylinders"])

    def test_lemmas(self, capsys):
        code, body = invoke(capsys, ["lemmas", *STRICT, "--samples", "20"])
        assert code == 0
        assert body["scaling_identity"]["all_hold"]


class TestGibbs:
    BASE = ["gibbs", "--p", "5"]

    def test_verify_unit_zero_couplings(self, capsys):
        code, body = invoke(capsys, [*self.BASE, "verify", "--source", "unit"])
        assert code == 0
        assert body["compatibility"]["ok"]
        assert body["compatibility"]["max_residual"] == "0"

    def test_solve_and_verify(self, capsys):
        argv = [*self.BASE, "solve", "--J", "5/1", "--J1", "5/1"]
        code, body = invoke(capsys, argv)
        assert code == 0
        assert body["compatibility"]["ok"]

    def test_verify_unit_with_J_alone_still_compatible(self, capsys):
        # with J1 = 0 the product system collapses to 1, so the unit field
        # remains compatible for any J
        code, body = invoke(capsys, [*self.BASE, "verify", "--source", "unit",
                                     "--J", "5/1"])
        assert code == 0 and body["compatibility"]["ok"]

    def test_verify_unit_both_couplings_exits_3(self, capsys):
        # the unit field stops being compatible only when both J and J1 are
        # nonzero: the residual of the product system is (a^2-1)(b^2-1)
        code = run([*self.BASE, "verify", "--source", "unit",
                    "--J", "5/1", "--J1", "5/1"])
        assert code == 3

    def test_periodic_without_diagonal_reports_no_placement(self, capsys):
        code, body = invoke(capsys, [*self.BASE, "periodic",
                                     "--J", "25/1", "--J1", "5/1"])
        assert code == 3
        assert body["error"] == "no valid placement"
        assert set(body["diagnostics"]) == {"++", "+-", "-+", "--"}

    def test_periodic_diagonal(self, capsys):
        code, body = invoke(capsys, [*self.BASE, "periodic", "--J", "25/1",
                                     "--J1", "5/1", "--diagonal"])
        assert code == 0
        placements = {c["placement"] for c in body["placements"]}
        assert "diagonal" in placements
        assert all(c["compatibility"]["ok"] for c in body["placements"])

    def test_periodic_word_orbit(self, capsys):
        code, body = invoke(capsys, [*self.BASE, "periodic", "--J", "25/1",
                                     "--J1", "5/1", "--word", "1,2",
                                     "--diagonal"])
        assert code == 0
        assert len(body["orbit"]) == 2
