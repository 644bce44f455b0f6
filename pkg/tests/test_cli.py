import json

import pytest

from pqml.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseCommand:
    def test_canonical_output(self, capsys):
        code, out, _ = run(capsys, "parse", "--formula", "~p0|p1")
        assert code == 0 and out.strip() == "p0 -> p1"

    def test_json_measures(self, capsys):
        code, out, _ = run(capsys, "parse", "--formula", "E p0. <>p0", "--json")
        obj = json.loads(out)
        assert obj["quantifier_depth"] == 1 and obj["modal_depth"] == 1

    def test_bad_formula_is_usage_error(self, capsys):
        code, _, err = run(capsys, "parse", "--formula", "p0 |")
        assert code == 2 and "error" in err


class TestEvalCommand:
    def test_reference_example(self, capsys):
        code, out, _ = run(capsys, "eval", "--frame", "chain:2",
                           "--formula", "E p0. <>p0 & ~p0", "--at", "0")
        assert code == 0 and out.strip() == "true"

    def test_extension_set(self, capsys):
        code, out, _ = run(capsys, "eval", "--frame", "chain:2",
                           "--formula", "E p0. <>p0 & ~p0")
        assert code == 0 and out.strip() == "{0}"

    def test_oracle_path_agrees(self, capsys):
        _, fast, _ = run(capsys, "eval", "--frame", "k5:1,2",
                         "--formula", "@At:1")
        _, slow, _ = run(capsys, "eval", "--frame", "k5:1,2",
                         "--formula", "@At:1", "--oracle")
        assert fast == slow

    def test_valuation_flag(self, capsys):
        code, out, _ = run(capsys, "eval", "--frame", "clique:2",
                           "--formula", "<>p0", "--let", "p0=0")
        assert code == 0 and out.strip() == "{0,1}"

    def test_guardrail_exit_code(self, capsys):
        code, _, err = run(capsys, "eval", "--frame", "recession:-10,10",
                           "--formula", "E p0. p0", "--oracle")
        assert code == 3 and "guardrail" in err

    def test_unbound_variable_usage_error(self, capsys):
        code, _, _ = run(capsys, "eval", "--frame", "clique:2",
                         "--formula", "p0")
        assert code == 2


class TestValidCommand:
    def test_atomicity_on_clique(self, capsys):
        code, out, _ = run(capsys, "valid", "--frame", "clique:3",
                           "--formula", "@At:1")
        assert code == 0 and out.strip() == "valid"

    def test_invalid_gives_counterexample(self, capsys):
        code, out, _ = run(capsys, "valid", "--frame", "chain:2",
                           "--formula", "p0 -> []p0")
        assert code == 1 and "invalid" in out and "0" in out

    def test_general_frame_from_file(self, capsys, tmp_path):
        path = tmp_path / "frame.json"
        path.write_text(json.dumps({
            "worlds": ["a", "b"],
            "relation": [["a", "a"], ["a", "b"], ["b", "a"], ["b", "b"]],
            "admissible": [[], ["a", "b"]],
        }))
        code, out, _ = run(capsys, "valid", "--frame", str(path),
                           "--formula", "p0 -> []p0")
        assert code == 0 and out.strip() == "valid"


class TestDiversityCommand:
    def test_cycle(self, capsys):
        code, out, _ = run(capsys, "diversity", "--frame", "cyclic:5")
        assert code == 0 and out.strip() == "5"

    def test_generated(self, capsys):
        code, out, _ = run(capsys, "diversity", "--frame", "d45:3",
                           "--generated")
        assert code == 0 and out.strip() == "2"


class TestClassesCommand:
    def test_text_listing(self, capsys):
        code, out, _ = run(capsys, "classes", "--frame", "k5:1,2")
        assert code == 0
        assert "D0 {r} kind=empty" in out

    def test_dot_output(self, capsys):
        code, out, _ = run(capsys, "classes", "--frame", "k5:1,2", "--dot")
        assert code == 0 and out.startswith("digraph")


class TestBreakdownCommand:
    def test_clique_triggered(self, capsys):
        code, out, _ = run(capsys, "breakdown", "--frame", "clique:3",
                           "--formula", "<>p0", "--let", "p0=0")
        assert code == 0 and out.strip() == "{0,1,2}: T"

    def test_identity_untriggered(self, capsys):
        code, out, _ = run(capsys, "breakdown", "--frame", "identity:3",
                           "--formula", "<>p0", "--let", "p0=0,2")
        assert code == 0 and out.strip() == "{0,1,2}: p0"


class TestInvariantCheckCommand:
    def test_failure_demo(self, capsys, tmp_path):
        path = tmp_path / "frame.json"
        path.write_text(json.dumps({
            "worlds": ["a", "b"],
            "relation": [["a", "a"], ["a", "b"], ["b", "a"], ["b", "b"]],
            "admissible": [[], ["a", "b"]],
        }))
        code, out, _ = run(capsys, "invariant-check", "--frame", str(path),
                           "--formula", "E p0. p0 & <>~p0")
        assert code == 1 and "failed" in out

    def test_full_frame_passes(self, capsys):
        code, out, _ = run(capsys, "invariant-check", "--frame", "clique:2",
                           "--formula", "E p0. p0 & <>~p0")
        assert code == 0 and "passed corpus" in out


class TestAxiomCommand:
    def test_trs_weakening(self, capsys):
        code, out, _ = run(capsys, "axiom", "trs", "--n", "0")
        assert code == 0 and out.strip() == "p0 -> p0 | <>p0"

    def test_q_instance(self, capsys):
        code, out, _ = run(capsys, "axiom", "q", "--n", "0", "--phi", "p0")
        assert code == 0
        assert out.strip() == "p0 & A p1. (p0 -> p1) | (p0 -> ~p1)"

    def test_json_carries_note(self, capsys):
        code, out, _ = run(capsys, "axiom", "at", "--n", "1", "--json")
        obj = json.loads(out)
        assert code == 0 and obj["name"] == "At" and obj["note"]

    def test_missing_grade_is_usage_error(self, capsys):
        code, _, err = run(capsys, "axiom", "at")
        assert code == 2


class TestSahlqvistCommand:
    def test_accept(self, capsys):
        code, out, _ = run(capsys, "sahlqvist", "--formula",
                           "[](<>p0 -> []<>p0)")
        assert code == 0 and out.strip().endswith("sahlqvist")

    def test_reject_exit_one(self, capsys):
        code, out, _ = run(capsys, "sahlqvist", "--formula", "[]<>p0 -> <>[]p0")
        assert code == 1 and "not sahlqvist" in out


class TestTruncateCommand:
    def test_depth_one_chain(self, capsys):
        code, out, _ = run(capsys, "truncate", "--frame", "chain:3",
                           "--at", "0", "--depth", "1", "--let", "p0=2")
        obj = json.loads(out)
        assert code == 0
        assert obj["worlds"] == ["0", "1"]
        assert obj["valuation"] == {"p0": []}


class TestGalleryCommand:
    def test_listing(self, capsys):
        code, out, _ = run(capsys, "gallery")
        assert code == 0
        assert "cyclic:3" in out and "caveat" in out

    def test_export_json(self, capsys):
        code, out, _ = run(capsys, "gallery", "--id", "cyclic:3", "--json")
        obj = json.loads(out)
        assert code == 0 and obj["worlds"] == ["0", "1", "2"]
        assert obj["provenance"]

    def test_export_dot(self, capsys):
        code, out, _ = run(capsys, "gallery", "--id", "chain:2", "--dot")
        assert code == 0 and '"0" -> "1";' in out

    def test_unknown_id_usage_error(self, capsys):
        code, _, _ = run(capsys, "gallery", "--id", "nope:1")
        assert code == 2


class TestUsage:
    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_unknown_frame(self, capsys):
        code, _, err = run(capsys, "diversity", "--frame", "bogus:1")
        assert code == 2 and "error" in err
