"""Tests for the command graph, the orchestrator and the command line."""

import io
import json
import unittest
from contextlib import redirect_stdout
from dataclasses import replace
from pathlib import Path
from unittest.mock import patch

from langgraph.graph.state import CompiledStateGraph

from src import cli
from src.algebra.errors import MissingDualBlock, UnknownBuiltin
from src.models.schemas import CliRequest, Command, OutputMode
from src.presentation.builtins import builtin
from src.presentation.compiler import compile_presentation
from src.processors.report_builder import ReportBuilder, exit_code_for
from src.workflow.commands import COMMANDS, BaseCommand
from src.workflow.graph import build_command_graph, command_graph, source_for
from src.workflow.orchestrator import WorkflowExecutionError, WorkflowOrchestrator

GOLDEN = Path(__file__).parent / "golden"


def _sample_request(command: str = "integrate", source: str | None = "builtin:dqs", **fields) -> CliRequest:
    return CliRequest.model_validate({"command": command, "input": source, **fields})


def _main_json(argv: list[str]) -> tuple[int, dict]:
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = cli.main(argv + ["--json"])
    return code, json.loads(buffer.getvalue())


def _golden(name: str) -> dict:
    return json.loads((GOLDEN / name).read_text(encoding="utf-8"))


class CommandGraphTests(unittest.TestCase):
    def test_command_graph_is_compiled(self) -> None:
        self.assertIsInstance(command_graph, CompiledStateGraph)

    def test_build_command_graph_returns_new_compiled_graph(self) -> None:
        graph = build_command_graph()
        self.assertIsInstance(graph, CompiledStateGraph)
        self.assertIsNot(graph, command_graph)

    def test_every_command_has_a_handler(self) -> None:
        self.assertEqual(set(COMMANDS), set(Command))

    def test_bare_builtin_names_are_prefixed(self) -> None:
        self.assertEqual(source_for(_sample_request("builtin", "dqs")), "builtin:dqs")
        self.assertEqual(source_for(_sample_request("check", "sample.hopf")), "sample.hopf")
        self.assertIsNone(source_for(_sample_request("identities", None)))

    def test_base_command_validates_subclass_name(self) -> None:
        with self.assertRaisesRegex(ValueError, "name"):
            class UnnamedCommand(BaseCommand):
                name = "integrate"

                def run(self, request, compiled):
                    return [], []


class OrchestratorTests(unittest.TestCase):
    def test_report_carries_request_fields(self) -> None:
        report = WorkflowOrchestrator().execute(_sample_request(element="a*b"))
        self.assertEqual(report.command, Command.integrate)
        self.assertEqual(report.input, "builtin:dqs")
        self.assertEqual(report.results[0]["value"], "1")
        self.assertEqual(report.results[0]["delta"], "a*b")

    def test_workflow_error_is_runtime_error_subclass(self) -> None:
        self.assertTrue(issubclass(WorkflowExecutionError, RuntimeError))

    def test_workflow_error_chains_original_cause(self) -> None:
        original = ValueError("underlying graph error")
        with patch("src.workflow.orchestrator.command_graph") as mock_graph:
            mock_graph.invoke.side_effect = original
            with self.assertRaises(WorkflowExecutionError) as ctx:
                WorkflowOrchestrator().execute(_sample_request())
        self.assertIs(ctx.exception.__cause__, original)
        self.assertIn("integrate failed to execute", str(ctx.exception))
        self.assertEqual(exit_code_for(ctx.exception), 1)

    def test_braided_input_without_dual_block_is_a_usage_error(self) -> None:
        compiled = replace(compile_presentation(builtin("fermionic-line")), companion=None, pair=None, cross=None, smash=None)
        for command in (Command.integrate, Command.delta):
            with self.subTest(command=command.value):
                with self.assertRaisesRegex(MissingDualBlock, "declares no dual block") as ctx:
                    COMMANDS[command].run(_sample_request(command.value, "builtin:fermionic-line"), compiled)
                self.assertEqual(exit_code_for(ctx.exception), 2)

    def test_domain_errors_keep_their_exit_code(self) -> None:
        with self.assertRaises(WorkflowExecutionError) as ctx:
            WorkflowOrchestrator().execute(_sample_request(source="builtin:nope"))
        self.assertIsInstance(ctx.exception.__cause__, UnknownBuiltin)
        self.assertEqual(exit_code_for(ctx.exception), 2)


class CommandLineTests(unittest.TestCase):
    def test_integrate_fermionic_line_matches_golden(self) -> None:
        code, report = _main_json(["integrate", "builtin:fermionic-line", "--elem", "xi"])
        self.assertEqual(code, 0)
        self.assertEqual(report, _golden("integrate-fermionic-line.json"))

    def test_identities_match_golden(self) -> None:
        code, report = _main_json(["identities"])
        self.assertEqual(code, 0)
        self.assertEqual(report, _golden("identities.json"))

    def test_unknown_builtin_matches_golden(self) -> None:
        code, report = _main_json(["integrate", "builtin:nope"])
        self.assertEqual(code, 2)
        self.assertEqual(report, _golden("unknown-builtin.json"))

    def test_argument_errors_exit_with_usage_code(self) -> None:
        with redirect_stdout(io.StringIO()), patch("sys.stderr", new_callable=io.StringIO):
            self.assertEqual(cli.main(["no-such-command"]), 2)
            self.assertEqual(cli.main(["integrate", "builtin:dqs", "--q-eval", "abc"]), 2)

    def test_left_integral_of_top_function(self) -> None:
        code, report = _main_json(["integrate", "builtin:dqs", "--side", "left", "--elem", "a*b", "--method", "modified"])
        self.assertEqual(code, 0)
        self.assertEqual(report["results"][0]["value"], "-1")

    def test_points_side_trace(self) -> None:
        code, report = _main_json(["integrate", "builtin:cyclic-group", "--n", "3", "--member", "H", "--method", "trace"])
        self.assertEqual(code, 0)
        self.assertEqual([entry["value"] for entry in report["results"]], ["1", "0", "0"])

    def test_q_eval_adds_evaluated_twin(self) -> None:
        code, rendered = cli.run(_sample_request(element="a", q_eval="1/2", output=OutputMode.json))
        self.assertEqual(code, 0)
        result = json.loads(rendered)["results"][0]
        self.assertEqual(result["value"], "-1")
        self.assertEqual(result["value_at_q"], "-1")

    def test_tensors_warns_about_the_corrected_cell(self) -> None:
        code, rendered = cli.run(_sample_request("tensors"))
        self.assertEqual(code, 0)
        self.assertIn("[tensors]", rendered)
        self.assertIn("W_0:", rendered)
        self.assertIn("warning: W_2 row x*y, column x is -1", rendered)
        self.assertIn("fails by x - x*y", rendered)

    def test_check_reports_passing_axioms(self) -> None:
        for source in ("builtin:dqs", "builtin:fermionic-line"):
            with self.subTest(source=source):
                code, report = _main_json(["check", source])
                self.assertEqual(code, 0)
                axioms = [entry for entry in report["results"] if entry["kind"] == "axioms"]
                self.assertTrue(axioms)
                self.assertTrue(all(entry["passed"] for entry in axioms))

    def test_delta_and_smash(self) -> None:
        _, delta = _main_json(["delta", "builtin:dqs"])
        self.assertEqual(delta["results"][0]["delta"], "a*b")
        self.assertEqual(delta["results"][0]["integrals"], {"1": "0", "a": "-1", "b": "0", "a*b": "1"})
        _, smash = _main_json(["smash", "builtin:dqs"])
        self.assertIn("x*a = 1 + a*x + b", smash["results"][0]["relations"])

    def test_text_failure_lists_the_error(self) -> None:
        builder = ReportBuilder()
        report = builder.failure(_sample_request(), UnknownBuiltin("unknown builtin 'nope'", witness=("nope",)))
        rendered = builder.render(report)
        self.assertIn("error: UnknownBuiltin: unknown builtin 'nope' at ['nope']", rendered)


if __name__ == "__main__":
    unittest.main()
