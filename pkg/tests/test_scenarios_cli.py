"""
Tests for scenario parsing and resolution, the runner and the xprod
command line: exit codes, builtins, expectations and reproducible reports.
"""

import json
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from src.schemas.input import FuzzOptions, RunOptions
from src.schemas.output import ERROR, FAIL, PASS, to_machine_json
from src.services.crossed_product import CrossedProduct, LElement
from src.services.cstar import BlockAlgebra
from src.services.errors import InputError, ParseError, UnresolvedReference
from src.services.partial_action import PartialAction
from src.services.runner import fuzz_suite, get_supported_checks, list_builtins, run_scenario
from src.services.scenario import THEOREM_CHECKS, Ref, evaluate_value, parse_scenario, resolve_scenario, to_matrix
from src.templates import TEMPLATES, get_template


SHIFT_ACTION = (
    "algebra A { blocks = [1, 1] }\n"
    "pauto shift { algebra = A; map = {0: 1} }\n"
    "partial_action alpha { algebra = A; group = Z; D = {1: [1], -1: [0]}; alpha = {1: shift} }\n"
)

Z3_TABLE = "[[0, 1, 2], [1, 2, 0], [2, 0, 1]]"

SHIFT_CROSSED = SHIFT_ACTION + (
    "rep pi { algebra = A; multiplicity = [1, 1] }\n"
    "family u { dim = 2; members = {0: [[1, 0], [0, 1]], 1: [[0, 0], [1, 0]], -1: [[0, 1], [0, 0]]} }\n"
    "covrep C { action = alpha; rep = pi; family = u; faithful = true }\n"
    "crossed X { action = alpha; covrep = C }\n"
)


# ============================================================================
# FIXTURES
# ============================================================================


@pytest.fixture
def write_scenario(tmp_path):
    """Write scenario text to a file and return its path as a string."""

    def _write(text: str, name: str = "scenario.xprod") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def resolve(text: str):
    return resolve_scenario(parse_scenario(text))


# ============================================================================
# VALUE EVALUATION
# ============================================================================


class TestEvaluateValue:
    """The whitelist evaluator for block values."""

    def test_arithmetic_with_constants(self):
        assert evaluate_value("2 * pi", 1) == pytest.approx(2 * math.pi)
        assert evaluate_value("sqrt(2) / 2", 1) == pytest.approx(math.sqrt(2) / 2)
        assert evaluate_value("-cos(0)", 1) == -1.0

    def test_booleans_and_strings(self):
        assert evaluate_value("true", 1) is True
        assert evaluate_value('"strict"', 1) == "strict"

    def test_bare_names_are_references(self):
        value = evaluate_value("{0: 1, -1: shift, pair: 3}", 4)
        assert value[0] == 1
        assert value[-1] == Ref("shift", 4)
        assert value["pair"] == 3

    def test_complex_matrix_entries(self):
        matrix = to_matrix(evaluate_value("[[1, 0], [0, [0, 1]]]", 1), 1)
        assert matrix.dtype == complex
        assert np.allclose(matrix, np.diag([1, 1j]))

    def test_ragged_matrix(self):
        with pytest.raises(ParseError):
            to_matrix([[1, 0], [0]], 1)

    @pytest.mark.parametrize("text", ["__import__('os')", "x.y", "1 / 0", "[1, 2", "-true"])
    def test_rejected_values(self, text):
        with pytest.raises(ParseError) as exc_info:
            evaluate_value(text, 7)
        assert exc_info.value.line == 7


# ============================================================================
# PARSING
# ============================================================================


class TestParseScenario:
    """Block scanning with line numbers."""

    def test_blocks_and_entries(self):
        scenario = parse_scenario(
            "# two blocks\n"
            "algebra A { blocks = [1, 2] }\n"
            "verify laws {\n"
            "    check = \"inverse_semigroup\"; mul = [[0, 1],\n"
            "                                     [1, 0]]\n"
            "}\n"
        )
        assert [b.kind for b in scenario.blocks] == ["algebra", "verify"]
        assert scenario.blocks[0].params == {"blocks": [1, 2]}
        assert scenario.blocks[1].line == 3
        assert scenario.blocks[1].params["mul"] == [[0, 1], [1, 0]]
        assert len(scenario.directives) == 1

    def test_unknown_block_kind(self):
        with pytest.raises(ParseError) as exc_info:
            parse_scenario("algebra A { blocks = [1] }\nwidget W { size = 1 }\n")
        assert exc_info.value.line == 2
        assert "widget" in str(exc_info.value)

    def test_missing_equals(self):
        with pytest.raises(ParseError) as exc_info:
            parse_scenario("algebra A { blocks [1, 1] }")
        assert "key = value" in str(exc_info.value)

    def test_duplicate_key(self):
        with pytest.raises(ParseError) as exc_info:
            parse_scenario("algebra A {\n  blocks = [1]\n  blocks = [2]\n}")
        assert exc_info.value.line == 3

    def test_unterminated_block(self):
        with pytest.raises(ParseError) as exc_info:
            parse_scenario("\n\nalgebra A { blocks = [1, 1]")
        assert exc_info.value.line == 3

    def test_unbalanced_brackets(self):
        with pytest.raises(ParseError):
            parse_scenario("algebra A { blocks = [1, 2)] }")

    def test_config_block(self):
        scenario = parse_scenario("config { tol = 1e-8; seed = 5 }")
        assert scenario.config.tol == 1e-8
        assert scenario.config.seed == 5

    @pytest.mark.parametrize("body", ["tol = -1", "colour = 1"])
    def test_invalid_config(self, body):
        with pytest.raises(ParseError):
            parse_scenario(f"config {{ {body} }}").config

    def test_single_config_block(self):
        with pytest.raises(ParseError):
            parse_scenario("config { seed = 1 }\nconfig { seed = 2 }").config


# ============================================================================
# RESOLUTION
# ============================================================================


class TestResolveScenario:
    """Named objects and directive binding."""

    def test_partial_action_block(self):
        resolved = resolve(SHIFT_ACTION)
        action = resolved.objects["alpha"]
        assert isinstance(resolved.objects["A"], BlockAlgebra)
        assert isinstance(action, PartialAction)
        assert action.group.name == "Z"
        assert action.D(1).sorted_blocks() == [1]

    def test_dangling_reference(self):
        with pytest.raises(UnresolvedReference) as exc_info:
            resolve("pauto s { algebra = B; map = {0: 0} }")
        assert exc_info.value.name == "B"

    def test_unnamed_object(self):
        with pytest.raises(ParseError) as exc_info:
            resolve("algebra { blocks = [1] }")
        assert "needs a name" in str(exc_info.value)

    def test_duplicate_name(self):
        with pytest.raises(ParseError):
            resolve("algebra A { blocks = [1] }\nalgebra A { blocks = [2] }")

    def test_construction_error_reported_at_block(self):
        """Blocks of different sizes cannot be swapped."""
        with pytest.raises(ParseError) as exc_info:
            resolve("algebra A { blocks = [1, 2] }\npauto s { algebra = A; map = {0: 1} }")
        assert exc_info.value.line == 2

    def test_verify_needs_check(self):
        with pytest.raises(ParseError):
            resolve("verify { size = 1 }")

    def test_default_directive_name(self):
        resolved = resolve(f"verify {{ check = \"inverse_semigroup\"; mul = {Z3_TABLE} }}")
        assert resolved.directives[0].name == "inverse_semigroup@1"

    def test_semigroup_from_group(self):
        resolved = resolve("semigroup S { group = \"S3\" }")
        assert resolved.objects["S"].n == 6

    def test_unknown_key_rejected(self):
        with pytest.raises(ParseError) as exc_info:
            resolve("algebra A { blocks = [1]; size = 2 }")
        assert exc_info.value.line == 1
        assert "size" in str(exc_info.value)

    def test_declared_support_matches_domains(self):
        resolved = resolve(SHIFT_ACTION.replace("D = ", "support = [1, -1]; D = "))
        assert list(resolved.objects["alpha"].support) == [-1, 0, 1]

    def test_declared_support_mismatch(self):
        with pytest.raises(ParseError) as exc_info:
            resolve(SHIFT_ACTION.replace("D = ", "support = [1]; D = "))
        assert exc_info.value.line == 3
        assert "support" in str(exc_info.value)

    def test_theorem_selects_check(self):
        resolved = resolve("semigroup S { group = \"S3\" }\nverify { theorem = \"5.10\"; semigroup = S }")
        directive = resolved.directives[0]
        assert directive.check == "scalar_crossed_product"
        assert directive.name == "scalar_crossed_product@2"
        assert "theorem" not in directive.params

    @pytest.mark.parametrize("name, check", [("section2", "partial_action_laws"), ("6.2", "main_theorem")])
    def test_theorem_names(self, name, check):
        resolved = resolve(f"verify {{ theorem = \"{name}\"; check = \"{check}\" }}")
        assert resolved.directives[0].check == check

    def test_unknown_theorem(self):
        with pytest.raises(ParseError) as exc_info:
            resolve("verify { theorem = \"9.9\" }")
        assert "Supported" in str(exc_info.value)

    def test_theorem_and_check_must_agree(self):
        with pytest.raises(ParseError):
            resolve("verify { theorem = \"5.8\"; check = \"main_theorem\" }")


# ============================================================================
# CROSSED PRODUCTS AND ELEMENTS OF L
# ============================================================================


class TestCrossedBlocks:
    """crossed and lelement blocks over the partial shift."""

    def test_crossed_block(self):
        crossed = resolve(SHIFT_CROSSED).objects["X"]
        assert isinstance(crossed, CrossedProduct)
        assert crossed.faithful
        assert crossed.pair.semigroup.n == 6
        assert crossed.action is crossed.pair.action

    def test_crossed_action_must_match_covrep(self):
        other = "partial_action beta { algebra = A; group = Z }\ncrossed Y { action = beta; covrep = C }\n"
        with pytest.raises(ParseError) as exc_info:
            resolve(SHIFT_CROSSED + other)
        assert exc_info.value.line == 9

    def test_crossed_needs_strict_covrep(self):
        text = SHIFT_CROSSED.replace("faithful = true }", "mode = \"lax\" }")
        with pytest.raises(ParseError) as exc_info:
            resolve(text)
        assert "strict" in str(exc_info.value)

    def test_lelement_from_deltas(self):
        resolved = resolve(SHIFT_CROSSED + "lelement x { crossed = X; deltas = {0: {0: [[2]]}, 1: [[[0]], [[1]]]} }\n")
        x = resolved.objects["x"]
        assert isinstance(x, LElement)
        assert len(x.support) == 2
        assert x.norm1() == pytest.approx(3.0)
        assert np.allclose(resolved.objects["X"].evaluate(x), [[2, 0], [1, 0]])

    def test_lelement_terms_by_index(self):
        resolved = resolve(SHIFT_CROSSED + "lelement x { crossed = X; terms = {0: [[[1]], [[1]]]} }\n")
        x = resolved.objects["x"]
        assert x.support == [0]
        assert np.allclose(resolved.objects["X"].evaluate(x), np.eye(2))

    @pytest.mark.parametrize(
        "body",
        [
            "terms = {99: [[[1]], [[1]]]}",
            "deltas = {1: [[[1]], [[0]]]}",
            "deltas = {5: [[[1]], [[0]]]}",
            "terms = {0: [[1, 0], [0, 1]]}",
        ],
    )
    def test_invalid_lelement(self, body):
        with pytest.raises(ParseError) as exc_info:
            resolve(SHIFT_CROSSED + f"lelement x {{ crossed = X; {body} }}\n")
        assert exc_info.value.line == 8

    def test_l_element_check(self, write_scenario):
        text = SHIFT_CROSSED + (
            "lelement x { crossed = X; deltas = {0: {0: [[2]]}, 1: [[[0]], [[1]]]} }\n"
            "verify image { check = \"l_element\"; crossed = X; element = x; expect_norm1 = 3.0 }\n"
            "verify calculus { theorem = \"section3\"; crossed = X }\n"
        )
        report = run_scenario(RunOptions(target=write_scenario(text)))
        image, calculus = report.outcomes
        assert image.status == PASS
        assert image.details["norm"] == pytest.approx(math.sqrt(5))
        assert image.residuals["contractive"] == 0.0
        assert calculus.status == PASS
        assert calculus.check == "covariant_calculus"

    def test_scenario_tolerance_reaches_unitaries(self, write_scenario):
        body = (
            "algebra A { blocks = [2] }\n"
            "pauto p { algebra = A; map = {0: 0}; unitaries = {0: [[1, 0.00001], [0, 1]]} }\n"
            f"verify {{ check = \"inverse_semigroup\"; mul = {Z3_TABLE} }}\n"
        )
        with pytest.raises(ParseError) as exc_info:
            run_scenario(RunOptions(target=write_scenario(body, "strict.xprod")))
        assert exc_info.value.line == 2
        report = run_scenario(RunOptions(target=write_scenario("config { tol = 1e-3 }\n" + body, "loose.xprod")))
        assert report.status == PASS


# ============================================================================
# RUNNER
# ============================================================================


class TestRunScenario:
    """Directive execution, expectations and settings precedence."""

    @pytest.mark.parametrize("name", list_builtins())
    def test_builtins_pass(self, name):
        report = run_scenario(RunOptions(target=name))
        assert report.status == PASS, [o.message for o in report.outcomes if o.status != PASS]
        assert report.exit_code == 0

    def test_expectations(self, write_scenario):
        path = write_scenario(
            f"verify ok {{ check = \"inverse_semigroup\"; mul = {Z3_TABLE}; expect_size = 3; expect_quotient_order = 3 }}\n"
            f"verify wrong {{ check = \"inverse_semigroup\"; mul = {Z3_TABLE}; expect_size = 4 }}\n"
            f"verify unknown {{ check = \"inverse_semigroup\"; mul = {Z3_TABLE}; expect_colour = 1 }}\n"
        )
        report = run_scenario(RunOptions(target=path))
        statuses = {o.name: o.status for o in report.outcomes}
        assert statuses == {"ok": PASS, "wrong": FAIL, "unknown": ERROR}
        wrong = next(o for o in report.outcomes if o.name == "wrong")
        assert wrong.certificate["error"] == "ExpectationFailed"
        assert report.exit_code == 1

    def test_expect_error(self, write_scenario):
        path = write_scenario(
            "verify bad { check = \"inverse_semigroup\"; mul = [[1, 1], [0, 0]]; expect_error = \"NotAssociative\" }\n"
            f"verify good {{ check = \"inverse_semigroup\"; mul = {Z3_TABLE}; expect_error = \"NotAssociative\" }}\n"
        )
        report = run_scenario(RunOptions(target=path))
        bad, good = report.outcomes
        assert bad.status == PASS
        assert "as expected" in bad.message
        assert good.status == FAIL

    def test_settings_precedence(self, write_scenario):
        path = write_scenario("config { seed = 5; tol = 1e-8 }\n" + SHIFT_ACTION + "verify { check = \"partial_action_laws\"; action = alpha }\n")
        from_config = run_scenario(RunOptions(target=path))
        assert from_config.seed == 5
        assert from_config.settings["tol"] == 1e-8
        from_flags = run_scenario(RunOptions(target=path, seed=9))
        assert from_flags.seed == 9

    def test_directive_seeds_are_spawned(self, write_scenario):
        directive = "verify { check = \"partial_action_laws\"; action = alpha }\n"
        path = write_scenario(SHIFT_ACTION + directive * 2)
        first, second = run_scenario(RunOptions(target=path, seed=3)).outcomes
        assert first.spawn_key == [0]
        assert second.spawn_key == [1]
        assert first.seed != second.seed

    def test_unknown_check(self, write_scenario):
        path = write_scenario("verify { check = \"no_such_check\" }")
        with pytest.raises(ParseError) as exc_info:
            run_scenario(RunOptions(target=path))
        assert "Supported" in str(exc_info.value)

    def test_missing_target(self):
        with pytest.raises(InputError):
            run_scenario(RunOptions(target="no/such/scenario.xprod"))

    def test_parallel_matches_sequential(self):
        sequential = run_scenario(RunOptions(target="example_6_3", jobs=1))
        parallel = run_scenario(RunOptions(target="example_6_3", jobs=2))
        assert [(o.name, o.status, o.seed, o.details) for o in parallel.outcomes] == [
            (o.name, o.status, o.seed, o.details) for o in sequential.outcomes
        ]

    def test_builtins_are_sorted(self):
        assert list_builtins() == sorted(TEMPLATES)
        assert get_template("example_6_3").summary().startswith("example_6_3: ")

    def test_builtin_catalog_lists_its_checks(self):
        for name in list_builtins():
            template = get_template(name)
            directives = parse_scenario(template.text, name).directives
            assert template.scenario_id == name
            assert set(template.checks) == {d.params.get("check") or THEOREM_CHECKS[d.params["theorem"]] for d in directives}
            assert set(template.checks) <= set(get_supported_checks())

    def test_unknown_builtin(self):
        with pytest.raises(ValueError) as exc_info:
            get_template("example_9_9")
        assert "Supported" in str(exc_info.value)


class TestFuzzSuite:
    """Seeded random campaigns."""

    @pytest.mark.parametrize("family", ["partial-action", "semilattice"])
    def test_no_violations(self, family):
        report = fuzz_suite(FuzzOptions(family=family, count=5, seed=3))
        assert report.instances == 5
        assert report.violations == []
        assert report.exit_code == 0

    def test_l_algebra_residuals_recorded(self):
        report = fuzz_suite(FuzzOptions(family="l-algebra", count=3, seed=1))
        assert report.violations == []
        assert report.max_residuals["associativity"] < 1e-9

    def test_same_seed_same_report(self):
        first = fuzz_suite(FuzzOptions(family="partial-action", count=4, seed=11))
        second = fuzz_suite(FuzzOptions(family="partial-action", count=4, seed=11))
        assert to_machine_json(first) == to_machine_json(second)

    @pytest.mark.parametrize("alias, family", [("section2", "partial-action"), ("section3", "covariant")])
    def test_aliases_run_the_same_instances(self, alias, family):
        aliased = fuzz_suite(FuzzOptions(family=alias, count=3, seed=5))
        direct = fuzz_suite(FuzzOptions(family=family, count=3, seed=5))
        assert aliased.family == alias
        assert aliased.violations == []
        assert aliased.max_residuals == direct.max_residuals


# ============================================================================
# COMMAND LINE
# ============================================================================


class TestCommandLine:
    """Exit codes and output of xprod."""

    def test_builtins_listing_is_lexicographic(self, capsys):
        assert main(["builtins"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert [line.split(":", 1)[0] for line in lines] == sorted(TEMPLATES)

    def test_run_builtin(self, capsys):
        assert main(["run", "rotation_counterexample"]) == EXIT_OK
        assert "rotation_counterexample" in capsys.readouterr().out

    def test_failing_check_exits_one(self, write_scenario):
        """The flip's family read strictly moves the wrong spaces."""
        text = get_template("example_6_4_finite_analog").text
        text += "verify strict_again { check = \"covariant_rep\"; covrep = C; mode = \"strict\" }\n"
        assert main(["run", write_scenario(text)]) == EXIT_FAILED

    def test_dangling_reference_exits_two(self, write_scenario, capsys):
        path = write_scenario("verify { check = \"partial_action_laws\"; action = missing }")
        assert main(["run", path]) == EXIT_INPUT
        assert "missing" in capsys.readouterr().err

    def test_unknown_check_exits_two(self, write_scenario):
        assert main(["run", write_scenario("verify { check = \"no_such_check\" }")]) == EXIT_INPUT

    def test_missing_file_exits_two(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "absent.xprod")]) == EXIT_INPUT
        assert "error: " in capsys.readouterr().err

    def test_invalid_flag_value_exits_two(self):
        assert main(["run", "example_6_3", "--tol", "-1"]) == EXIT_INPUT
        assert main(["run", "example_6_3", "--jobs", "0"]) == EXIT_INPUT

    def test_unknown_mode_rejected_by_parser(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["run", "example_6_3", "--mode", "loose"])
        assert exc_info.value.code == 2

    def test_zero_fuzz_count_exits_two(self, capsys):
        assert main(["fuzz", "partial-action", "--count", "0"]) == EXIT_INPUT
        assert "count" in capsys.readouterr().err

    def test_fuzz_section2_campaign(self, capsys):
        assert main(["fuzz", "section2", "--count", "100", "--seed", "7"]) == EXIT_OK

    def test_fuzz_writes_machine_report(self, tmp_path):
        target = tmp_path / "fuzz.json"
        assert main(["fuzz", "partial-action", "--count", "3", "--machine-report", str(target)]) == EXIT_OK
        data = json.loads(target.read_text(encoding="utf-8"))
        assert data["family"] == "partial-action"
        assert data["status"] == PASS
        assert "wall_time" not in data

    def test_machine_report_is_reproducible(self, tmp_path):
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        assert main(["run", "example_6_3", "--seed", "4", "--machine-report", str(first)]) == EXIT_OK
        assert main(["run", "example_6_3", "--seed", "4", "--machine-report", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        data = json.loads(first.read_text(encoding="utf-8"))
        assert data["seed"] == 4
        assert all("wall_time" not in outcome for outcome in data["outcomes"])

    def test_text_report_written(self, tmp_path):
        target = tmp_path / "reports" / "run.md"
        assert main(["run", "scalar_5_10", "--report", str(target)]) == EXIT_OK
        assert target.read_text(encoding="utf-8").strip()
