"""The example library: shipped ``.hopf`` sources and generated families."""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Any, Callable, Mapping

from src.algebra.errors import BadParam, InputResolutionError, UnknownBuiltin
from src.config.settings import settings
from src.presentation.parser import PresentationAST, parse

logger = logging.getLogger(__name__)

FILE_BUILTINS = ("dqs", "dqs-dual", "fermionic-line")
FAMILY_PARAMS = {"cyclic-group": ("n", 2), "q-plane": ("n", 2)}
BUILTIN_NAMES = tuple(sorted(FILE_BUILTINS + tuple(FAMILY_PARAMS)))


def _power(letter: str, exponent: int) -> str:
    return letter if exponent == 1 else f"{letter}^{exponent}"


def cyclic_group_source(n: int) -> str:
    """Group algebra of Z_n on 1, g, ..., g^(n-1)."""
    basis = " ".join(["1"] + [_power("g", k) for k in range(1, n)])
    return "\n".join(
        [
            f"algebra cyclic-group-{n}",
            "generators g",
            "relations",
            f"  {_power('g', n)} = 1",
            f"basis {basis}",
            "coproduct",
            "  g -> g(*)g",
            "counit g -> 1",
            "antipode",
            f"  g -> {_power('g', n - 1)}",
            "",
        ]
    )


def _qplane_block(keyword: str, name: str, stem: str, N: int, points: bool) -> list[str]:
    letters = [f"{stem}{i}" for i in range(1, N + 1)]
    # A uses xi_j xi_i = -q xi_i xi_j; the points side uses q^-1 throughout.
    swap, inverse = ("-q^-1", "-q") if points else ("-q", "-q^-1")
    defect = "(1 - q^2)" if points else "(1 - q^-2)"
    lines = [f"{keyword} {name} over Q(q)", "generators " + " ".join(letters), "relations"]
    for i, x in enumerate(letters):
        lines.append(f"  {x}*{x} = 0")
        for y in letters[i + 1 :]:
            lines.append(f"  {y}*{x} = {swap}*{x}*{y}")
    basis = ["*".join(letters[k - 1] for k in subset) for r in range(1, N + 1) for subset in combinations(range(1, N + 1), r)]
    lines.append("basis " + " ".join(["1"] + basis))
    lines.append("coproduct")
    lines.extend(f"  {x} -> {x}(*)1 + 1(*){x}" for x in letters)
    lines.append("counit " + " ; ".join(f"{x} -> 0" for x in letters))
    lines.append("antipode " + " ; ".join(f"{x} -> -{x}" for x in letters))
    lines.append("braiding")
    for i, x in enumerate(letters):
        for j, y in enumerate(letters):
            if i == j:
                lines.append(f"  {x}(*){x} -> -{x}(*){x}")
            elif i < j:
                lines.append(f"  {x}(*){y} -> {inverse}*{y}(*){x} - {defect}*{x}(*){y}")
            else:
                lines.append(f"  {x}(*){y} -> {inverse}*{y}(*){x}")
    return lines


def q_plane_source(N: int) -> str:
    """Points sigma_i paired with the q-fermionic plane xi_i, with explicit cross relations."""
    lines = _qplane_block("algebra", f"q-plane-{N}", "sigma", N, points=True)
    lines += _qplane_block("dual", f"q-plane-{N}-dual", "xi", N, points=False)
    lines.append("pairing")
    lines.extend(f"  sigma{i} , xi{i} -> 1" for i in range(1, N + 1))
    lines.append("smash")
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i != j:
                lines.append(f"  sigma{i} * xi{j} -> -q*xi{j}*sigma{i}")
                continue
            lower = " + ".join(f"xi{m}*sigma{m}" for m in range(1, i))
            tail = f" + (q^2 - 1)*({lower})" if lower else ""
            lines.append(f"  sigma{i} * xi{i} -> 1 - xi{i}*sigma{i}{tail}")
    lines.append("")
    return "\n".join(lines)


def _int_param(name: str, params: Mapping[str, Any]) -> int:
    key, default = FAMILY_PARAMS[name]
    raw = params.get(key, default)
    try:
        value = int(raw)
    except (TypeError, ValueError) as exc:
        raise BadParam(f"{name}: parameter {key} must be an integer, got {raw!r}", witness=(key, raw)) from exc
    if isinstance(raw, float) and raw != value:
        raise BadParam(f"{name}: parameter {key} must be an integer, got {raw!r}", witness=(key, raw))
    return value


def _cyclic(params: Mapping[str, Any]) -> str:
    n = _int_param("cyclic-group", params)
    if n < 2:
        raise BadParam(f"cyclic-group needs n >= 2, got {n}", witness=("n", n))
    return cyclic_group_source(n)


def _q_plane(params: Mapping[str, Any]) -> str:
    N = _int_param("q-plane", params)
    if not 1 <= N <= settings.qplane_max_n:
        raise BadParam(f"q-plane needs 1 <= N <= {settings.qplane_max_n}, got {N}", witness=("n", N))
    if N >= settings.qplane_warn_n:
        logger.warning("q-plane N=%d builds a smash product of dimension %d; expect a long run", N, 4**N)
    return q_plane_source(N)


def _shipped(name: str) -> str:
    path = settings.presentations_dir / f"{name}.hopf"
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputResolutionError(f"cannot read shipped presentation {path}", witness=(str(path),)) from exc


_FAMILIES: dict[str, Callable[[Mapping[str, Any]], str]] = {"cyclic-group": _cyclic, "q-plane": _q_plane}


def builtin_source(name: str, params: Mapping[str, Any] | None = None) -> str:
    params = params or {}
    if name in _FAMILIES:
        return _FAMILIES[name](params)
    if name in FILE_BUILTINS:
        if params:
            raise BadParam(f"{name} takes no parameters", witness=tuple(params))
        return _shipped(name)
    raise UnknownBuiltin(f"unknown builtin '{name}'; expected one of {', '.join(BUILTIN_NAMES)}", witness=(name,))


def builtin(name: str, params: Mapping[str, Any] | None = None) -> PresentationAST:
    ast = parse(builtin_source(name, params))
    logger.debug("Loaded builtin %s", ast.name)
    return ast
