"""LangGraph workflow that loads, compiles and dispatches one CLI request."""

from __future__ import annotations

import logging
from typing import Annotated, Any, TypedDict

from langgraph.graph import END, StateGraph
from langgraph.graph.state import CompiledStateGraph

from src.models.schemas import CliRequest, Command
from src.presentation.compiler import CompiledPresentation, compile_presentation
from src.presentation.parser import PresentationAST
from src.services.presentation_loader import BUILTIN_PREFIX, PresentationLoader
from src.workflow.commands import COMMANDS

logger = logging.getLogger(__name__)

_loader = PresentationLoader()


# ---------------------------------------------------------------------------
# Graph state
# ---------------------------------------------------------------------------

def _append(existing: list, new: list) -> list:
    """Reducer that appends node output to the accumulated list."""
    return existing + new


class CommandState(TypedDict):
    """Shared state passed through every node of the command workflow."""

    request: CliRequest
    ast: PresentationAST | None
    compiled: CompiledPresentation | None
    results: Annotated[list[dict[str, Any]], _append]
    warnings: Annotated[list[str], _append]


def source_for(request: CliRequest) -> str | None:
    """The loader URI for a request; bare names given to ``builtin`` are builtin names."""
    if request.input is None:
        return None
    if request.command is Command.builtin and not request.input.startswith(BUILTIN_PREFIX):
        return BUILTIN_PREFIX + request.input
    return request.input


def _params(request: CliRequest) -> dict[str, Any]:
    return {"n": request.n} if request.n is not None else {}


# ---------------------------------------------------------------------------
# Nodes
# ---------------------------------------------------------------------------

def load_node(state: CommandState) -> dict:
    request = state["request"]
    source = source_for(request)
    if source is None:
        return {"ast": None}
    params = _params(request) if source.startswith(BUILTIN_PREFIX) else {}
    return {"ast": _loader.load(source, params)}


def compile_node(state: CommandState) -> dict:
    ast = state.get("ast")
    if ast is None:
        return {"compiled": None}
    compiled = compile_presentation(ast)
    return {"compiled": compiled, "warnings": list(compiled.warnings)}


def route_command(state: CommandState) -> str:
    return state["request"].command.value


def _command_node(command: Command):
    handler = COMMANDS[command]

    def node(state: CommandState) -> dict:
        compiled = state.get("compiled")
        if handler.needs_input:
            handler.require(compiled)
        results, warnings = handler.run(state["request"], compiled)
        logger.debug("Command %s produced %d results", command.value, len(results))
        return {"results": results, "warnings": warnings}

    node.__name__ = f"{command.value}_node"
    return node


# ---------------------------------------------------------------------------
# Graph construction
# ---------------------------------------------------------------------------

def build_command_graph() -> CompiledStateGraph:
    """Construct and compile the command workflow."""
    workflow = StateGraph(CommandState)
    workflow.add_node("load", load_node)
    workflow.add_node("compile", compile_node)
    for command in Command:
        workflow.add_node(command.value, _command_node(command))
        workflow.add_edge(command.value, END)

    workflow.set_entry_point("load")
    workflow.add_edge("load", "compile")
    workflow.add_conditional_edges("compile", route_command, {command.value: command.value for command in Command})
    return workflow.compile()


# Module-level compiled graph (singleton)
try:
    command_graph: CompiledStateGraph = build_command_graph()
except Exception as exc:  # pragma: no cover - initialization guard
    raise RuntimeError("Failed to build command graph during module import") from exc
