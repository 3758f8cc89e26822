"""Resolution of CLI inputs to parsed presentations."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Mapping

from src.algebra.errors import InputResolutionError
from src.presentation.builtins import builtin
from src.presentation.parser import PresentationAST, parse

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"


class PresentationLoader:
    """Turns ``builtin:<name>`` URIs and ``.hopf`` paths into presentations."""

    def load(self, source: str, params: Mapping[str, Any] | None = None) -> PresentationAST:
        if source.startswith(BUILTIN_PREFIX):
            name = source[len(BUILTIN_PREFIX) :].strip()
            logger.debug("Resolving builtin %s with %s", name, dict(params or {}))
            return builtin(name, params)
        return parse(self.read(source))

    @staticmethod
    def read(source: str) -> str:
        path = Path(source)
        try:
            return path.read_text(encoding="utf-8")
        except FileNotFoundError as exc:
            raise InputResolutionError(f"input file {source} does not exist", witness=(source,)) from exc
        except (OSError, UnicodeDecodeError) as exc:
            raise InputResolutionError(f"cannot read input file {source}: {exc}", witness=(source,)) from exc
