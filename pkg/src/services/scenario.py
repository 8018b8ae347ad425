"""Scenario files: parsing and reference resolution.

A scenario is a sequence of blocks

    # comment
    algebra A { blocks = [1, 1] }
    pauto shift { algebra = A; map = {0: 1} }
    verify { check = "main_theorem"; covrep = C; amplifications = [1, 2] }

Values are Python-like literals evaluated by a small whitelist evaluator:
numbers, strings, true/false, lists, dicts, arithmetic with ``pi``,
``sqrt``/``sin``/``cos``, and bare identifiers, which refer to earlier
named blocks. Matrix entries are numbers or ``[re, im]`` pairs.

Object blocks reject keys they do not understand. A verify block names its
check directly or through ``theorem``.
"""

import ast
import logging
import math
import operator
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from ..config import current_settings
from ..schemas.input import Block, ScenarioConfig
from .covariant import CovariantRep, HilbertRep, PartialIsometryFamily
from .crossed_product import CrossedProduct, LElement
from .cstar import BlockAlgebra, Element, Ideal, PartialAutomorphism
from .errors import AlgebraError, CovrepMismatch, InputError, ParseError, UnresolvedReference
from .partial_action import GroupOracle, PartialAction, TableGroup, get_group
from .semigroup import (
    FiniteInverseSemigroup,
    cyclic_group,
    symmetric_group,
    symmetric_inverse_monoid,
    two_point_semilattice,
    verify_inverse_semigroup,
)

logger = logging.getLogger(__name__)

BLOCK_KINDS = (
    "config",
    "algebra",
    "ideal",
    "pauto",
    "semigroup",
    "partial_action",
    "rep",
    "family",
    "covrep",
    "crossed",
    "lelement",
    "verify",
)
TEXT_KEYS = {"check", "mode", "group", "preset", "theorem"}

# Keys each object block understands; verify blocks pass theirs to the check.
ALLOWED_KEYS: Dict[str, Tuple[str, ...]] = {
    "algebra": ("blocks",),
    "ideal": ("algebra", "blocks"),
    "pauto": ("algebra", "identity", "map", "unitaries"),
    "semigroup": ("mul", "labels", "group", "preset", "m", "n"),
    "partial_action": ("algebra", "group", "support", "D", "alpha"),
    "rep": ("algebra", "multiplicity"),
    "family": ("dim", "members"),
    "covrep": ("action", "rep", "family", "mode", "faithful"),
    "crossed": ("action", "covrep", "faithful"),
    "lelement": ("crossed", "terms", "deltas"),
}

# Verify blocks may name the statement they exercise instead of the check.
THEOREM_CHECKS: Dict[str, str] = {
    "5.8": "semilattice_crossed_product",
    "5.10": "scalar_crossed_product",
    "5.11": "idempotent_decomposition",
    "6.2": "main_theorem",
    "section2": "partial_action_laws",
    "section3": "covariant_calculus",
}

_HEADER = re.compile(r"([A-Za-z_]\w*)(?:[ \t]+([A-Za-z_]\w*))?\s*\{")
_KEY = re.compile(r"^\s*([A-Za-z_]\w*)\s*=(?!=)")


@dataclass(frozen=True)
class Ref:
    """A bare identifier in a value, resolved against earlier named blocks."""

    name: str
    line: int


@dataclass
class Scenario:
    source: str
    blocks: List[Block]

    @property
    def config(self) -> ScenarioConfig:
        found = [b for b in self.blocks if b.kind == "config"]
        if len(found) > 1:
            raise ParseError(found[1].line, "only one config block is allowed")
        if not found:
            return ScenarioConfig()
        try:
            return ScenarioConfig(**found[0].params)
        except ValidationError as exc:
            raise ParseError(found[0].line, f"invalid config: {exc.errors()[0]['msg']}")

    @property
    def directives(self) -> List[Block]:
        return [b for b in self.blocks if b.kind == "verify"]


@dataclass
class Directive:
    """A verify block with its references replaced by resolved objects."""

    name: str
    check: str
    params: Dict[str, Any]
    line: int


@dataclass
class ResolvedScenario:
    source: str
    objects: Dict[str, Any] = field(default_factory=dict)
    directives: List[Directive] = field(default_factory=list)


# ============================================================================
# VALUE EVALUATION
# ============================================================================

_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCTIONS: Dict[str, Callable[..., float]] = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos}
_CONSTANTS = {"pi": math.pi, "true": True, "false": False, "True": True, "False": False}


def _evaluate(node: ast.AST, line: int) -> Any:
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, line)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, str, bool)):
        return node.value
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_evaluate(e, line) for e in node.elts]
    if isinstance(node, ast.Dict):
        result = {}
        for k, v in zip(node.keys, node.values):
            key = _evaluate(k, line)
            if isinstance(key, Ref):
                key = key.name
            if isinstance(key, list):
                raise ParseError(line, "dict keys must be numbers or names")
            result[key] = _evaluate(v, line)
        return result
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _evaluate(node.operand, line)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(line, "unary sign needs a number")
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        left, right = _evaluate(node.left, line), _evaluate(node.right, line)
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (left, right)):
            raise ParseError(line, "arithmetic needs numbers")
        try:
            return _BINARY[type(node.op)](left, right)
        except ZeroDivisionError:
            raise ParseError(line, "division by zero")
    if isinstance(node, ast.Name):
        if node.id in _CONSTANTS:
            return _CONSTANTS[node.id]
        return Ref(node.id, line)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS and not node.keywords:
        args = [_evaluate(a, line) for a in node.args]
        return _FUNCTIONS[node.func.id](*args)
    raise ParseError(line, f"unsupported expression ({type(node).__name__})")


def evaluate_value(text: str, line: int) -> Any:
    """Evaluate one value literal.

    Raises:
        ParseError: syntax errors or unsupported constructs
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(line, f"cannot parse value '{text.strip()}': {exc.msg}")
    return _evaluate(tree, line)


# ============================================================================
# BLOCK SCANNER
# ============================================================================


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _skip_blank(text: str, pos: int) -> int:
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
        elif text[pos] == "#":
            end = text.find("\n", pos)
            pos = len(text) if end < 0 else end + 1
        else:
            break
    return pos


def _scan_body(text: str, start: int, header_line: int) -> Tuple[List[Tuple[str, int]], int]:
    """Split a block body into (entry text, line) at top-level ';' and newlines."""
    entries: List[Tuple[str, int]] = []
    depth = 0
    quote: Optional[str] = None
    current: List[str] = []
    entry_line = _line_of(text, start)
    pos = start
    while pos < len(text):
        ch = text[pos]
        if quote:
            current.append(ch)
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
            current.append(ch)
        elif ch == "#":
            end = text.find("\n", pos)
            pos = len(text) if end < 0 else end
            continue
        elif ch in "([{":
            depth += 1
            current.append(ch)
        elif ch in ")]":
            depth -= 1
            current.append(ch)
        elif ch == "}":
            if depth == 0:
                entries.append(("".join(current), entry_line))
                return [(e, n) for e, n in entries if e.strip()], pos + 1
            depth -= 1
            current.append(ch)
        elif ch in ";\n" and depth == 0:
            entries.append(("".join(current), entry_line))
            current = []
            entry_line = _line_of(text, pos + 1)
        else:
            current.append(ch)
        if depth < 0:
            raise ParseError(_line_of(text, pos), "unbalanced brackets")
        pos += 1
    raise ParseError(header_line, "unterminated block")


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse scenario text into blocks with evaluated (unresolved) values.

    Raises:
        ParseError
    """
    blocks: List[Block] = []
    pos = _skip_blank(text, 0)
    while pos < len(text):
        line = _line_of(text, pos)
        match = _HEADER.match(text, pos)
        if not match:
            raise ParseError(line, f"expected '<kind> [name] {{', found '{text[pos:pos + 20].splitlines()[0]}'")
        kind, name = match.group(1), match.group(2)
        if kind not in BLOCK_KINDS:
            raise ParseError(line, f"unknown block kind '{kind}'. Supported: {', '.join(BLOCK_KINDS)}")
        entries, pos = _scan_body(text, match.end(), line)
        params: Dict[str, Any] = {}
        for entry, entry_line in entries:
            key_match = _KEY.match(entry)
            if not key_match:
                raise ParseError(entry_line, f"expected 'key = value', found '{entry.strip()}'")
            key = key_match.group(1)
            if key in params:
                raise ParseError(entry_line, f"duplicate key '{key}'")
            params[key] = evaluate_value(entry[key_match.end():], entry_line)
        blocks.append(Block(kind=kind, name=name, params=params, line=line))
        pos = _skip_blank(text, pos)
    logger.debug(f"Parsed {len(blocks)} blocks from {source}")
    return Scenario(source=source, blocks=blocks)


# ============================================================================
# RESOLUTION
# ============================================================================


class _Context:
    """Named objects seen so far, with typed lookups."""

    def __init__(self):
        self.objects: Dict[str, Any] = {}

    def get(self, value: Any, expected: type, block: Block, key: str) -> Any:
        if isinstance(value, Ref):
            if value.name not in self.objects:
                raise UnresolvedReference(value.name, value.line)
            value = self.objects[value.name]
        if not isinstance(value, expected):
            raise ParseError(block.line, f"'{key}' of {block.kind} must be {expected.__name__}, got {type(value).__name__}")
        return value

    def resolve_all(self, value: Any, key: str = "") -> Any:
        if isinstance(value, Ref):
            if value.name in self.objects:
                return self.objects[value.name]
            if key in TEXT_KEYS:
                return value.name
            raise UnresolvedReference(value.name, value.line)
        if isinstance(value, list):
            return [self.resolve_all(v, key) for v in value]
        if isinstance(value, dict):
            return {k: self.resolve_all(v, key) for k, v in value.items()}
        return value


def _require(block: Block, *keys: str) -> None:
    missing = [k for k in keys if k not in block.params]
    if missing:
        raise ParseError(block.line, f"{block.kind} block is missing {', '.join(missing)}")


def _text(value: Any) -> str:
    return value.name if isinstance(value, Ref) else str(value)


def to_matrix(value: Any, line: int) -> np.ndarray:
    """Rows of numbers or [re, im] pairs as a complex matrix."""
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        raise ParseError(line, "a matrix is a non-empty list of rows")

    def entry(x: Any) -> complex:
        if isinstance(x, (int, float)) and not isinstance(x, bool):
            return complex(x)
        if isinstance(x, list) and len(x) == 2 and all(isinstance(p, (int, float)) for p in x):
            return complex(x[0], x[1])
        raise ParseError(line, f"matrix entries are numbers or [re, im] pairs, got {x!r}")

    rows = [[entry(x) for x in row] for row in value]
    if len({len(r) for r in rows}) != 1:
        raise ParseError(line, "matrix rows have different lengths")
    return np.array(rows, dtype=complex)


def _ideal(ctx: _Context, value: Any, algebra: BlockAlgebra, block: Block, key: str) -> Ideal:
    if isinstance(value, list):
        return algebra.ideal(int(b) for b in value)
    ideal = ctx.get(value, Ideal, block, key)
    if ideal.parent != algebra:
        raise ParseError(block.line, f"ideal '{key}' belongs to another algebra")
    return ideal


def _resolve_algebra(ctx: _Context, block: Block) -> BlockAlgebra:
    _require(block, "blocks")
    return BlockAlgebra(tuple(int(n) for n in block.params["blocks"]))


def _resolve_ideal(ctx: _Context, block: Block) -> Ideal:
    _require(block, "algebra", "blocks")
    algebra = ctx.get(block.params["algebra"], BlockAlgebra, block, "algebra")
    return _ideal(ctx, block.params["blocks"], algebra, block, "blocks")


def _resolve_pauto(ctx: _Context, block: Block) -> PartialAutomorphism:
    _require(block, "algebra")
    algebra = ctx.get(block.params["algebra"], BlockAlgebra, block, "algebra")
    label = block.name or ""
    if "identity" in block.params:
        ideal = _ideal(ctx, block.params["identity"], algebra, block, "identity")
        identity = PartialAutomorphism.identity(ideal)
        return PartialAutomorphism(identity.dom, identity.cod, identity.block_map, identity.unitaries, label, current_settings().tol)
    _require(block, "map")
    block_map = {int(i): int(j) for i, j in block.params["map"].items()}
    given = block.params.get("unitaries", {})
    unitaries = {
        i: to_matrix(given[i], block.line) if i in given else np.eye(algebra.block_dims[i], dtype=complex)
        for i in block_map
    }
    return PartialAutomorphism(
        dom=algebra.ideal(block_map.keys()),
        cod=algebra.ideal(block_map.values()),
        block_map=block_map,
        unitaries=unitaries,
        label=label,
        tol=current_settings().tol,
    )


SEMIGROUP_PRESETS: Dict[str, Callable[[Dict[str, Any]], FiniteInverseSemigroup]] = {
    "symmetric_inverse": lambda p: symmetric_inverse_monoid(int(p.get("m", 2))),
    "two_point": lambda p: two_point_semilattice(),
    "cyclic": lambda p: cyclic_group(int(p.get("n", 2))),
    "symmetric": lambda p: symmetric_group(int(p.get("n", 3))),
}


def _resolve_semigroup(ctx: _Context, block: Block) -> FiniteInverseSemigroup:
    params = block.params
    if "mul" in params:
        labels = params.get("labels")
        return verify_inverse_semigroup(params["mul"], [str(x) for x in labels] if labels else None)
    if "group" in params:
        group = get_group(_text(params["group"]))
        if not isinstance(group, TableGroup):
            raise ParseError(block.line, f"group '{group.name}' is infinite and has no table")
        return group.table
    if "preset" in params:
        preset = _text(params["preset"])
        factory = SEMIGROUP_PRESETS.get(preset)
        if not factory:
            raise ParseError(block.line, f"Unsupported preset: {preset}. Supported: {', '.join(sorted(SEMIGROUP_PRESETS))}")
        return factory(params)
    raise ParseError(block.line, "semigroup needs one of mul, group or preset")


def _group(ctx: _Context, value: Any, block: Block) -> GroupOracle:
    if isinstance(value, Ref) and value.name in ctx.objects:
        return TableGroup(ctx.get(value, FiniteInverseSemigroup, block, "group"), value.name)
    return get_group(_text(value))


def _resolve_partial_action(ctx: _Context, block: Block) -> PartialAction:
    _require(block, "algebra", "group")
    algebra = ctx.get(block.params["algebra"], BlockAlgebra, block, "algebra")
    group = _group(ctx, block.params["group"], block)
    domains = {group.normalize(g): _ideal(ctx, v, algebra, block, "D") for g, v in block.params.get("D", {}).items()}
    alphas = {
        group.normalize(g): ctx.get(v, PartialAutomorphism, block, "alpha")
        for g, v in block.params.get("alpha", {}).items()
    }
    action = PartialAction.build(algebra, group, domains, alphas, label=block.name or "")
    if "support" in block.params:
        declared = {group.normalize(_text(g) if isinstance(g, Ref) else g) for g in block.params["support"]} | {group.identity}
        if declared != set(action.support):
            raise ParseError(
                block.line,
                f"support {sorted(map(str, declared))} does not match the keys of D and alpha {sorted(map(str, action.support))}",
            )
    return action


def _resolve_rep(ctx: _Context, block: Block) -> HilbertRep:
    _require(block, "algebra", "multiplicity")
    algebra = ctx.get(block.params["algebra"], BlockAlgebra, block, "algebra")
    return HilbertRep.canonical(algebra, [int(m) for m in block.params["multiplicity"]], label=block.name or "")


def _resolve_family(ctx: _Context, block: Block) -> PartialIsometryFamily:
    _require(block, "dim", "members")
    dim = int(block.params["dim"])
    members = {}
    for key, value in block.params["members"].items():
        matrix = to_matrix(value, block.line)
        if matrix.shape != (dim, dim):
            raise ParseError(block.line, f"member {key} is {matrix.shape[0]}x{matrix.shape[1]}, expected {dim}x{dim}")
        members[key] = matrix
    return PartialIsometryFamily(dim=dim, members=members)


def _resolve_covrep(ctx: _Context, block: Block) -> CovariantRep:
    _require(block, "action", "rep", "family")
    action = ctx.get(block.params["action"], PartialAction, block, "action")
    rep = ctx.get(block.params["rep"], HilbertRep, block, "rep")
    raw = ctx.get(block.params["family"], PartialIsometryFamily, block, "family")
    family = PartialIsometryFamily(dim=raw.dim, members={action.group.normalize(k): m for k, m in raw.members.items()})
    mode = _text(block.params.get("mode", current_settings().mode))
    if mode not in ("strict", "lax"):
        raise ParseError(block.line, f"Unsupported mode: {mode}. Supported: lax, strict")
    return CovariantRep(
        action=action,
        rep=rep,
        family=family,
        mode=mode,
        faithful=bool(block.params.get("faithful", False)),
        label=block.name or "",
    )


def _resolve_crossed(ctx: _Context, block: Block) -> CrossedProduct:
    _require(block, "covrep")
    covrep = ctx.get(block.params["covrep"], CovariantRep, block, "covrep")
    if "action" in block.params and ctx.get(block.params["action"], PartialAction, block, "action") is not covrep.action:
        raise CovrepMismatch("covariant representation belongs to a different partial action")
    settings = current_settings()
    return CrossedProduct.build(
        covrep,
        faithful=bool(block.params.get("faithful", covrep.faithful)),
        label=block.name or "",
        bound=settings.closure_bound,
        tol=settings.tol,
    )


def _element(value: Any, algebra: BlockAlgebra, block: Block) -> Element:
    """A list with one matrix per block, or a dict from block index to matrix."""
    if isinstance(value, list) and len(value) == algebra.k and all(isinstance(m, list) for m in value):
        blocks = dict(enumerate(value))
    elif isinstance(value, dict):
        blocks = {int(i): m for i, m in value.items()}
    else:
        raise ParseError(block.line, f"an element is a list of {algebra.k} block matrices or a dict from block to matrix")
    return algebra.element({i: to_matrix(m, block.line) for i, m in blocks.items()})


def _resolve_lelement(ctx: _Context, block: Block) -> LElement:
    _require(block, "crossed")
    crossed = ctx.get(block.params["crossed"], CrossedProduct, block, "crossed")
    algebra = crossed.action.algebra
    S = crossed.action.semigroup
    tol = current_settings().tol
    x = LElement(crossed.action, {}, tol)
    for key, value in block.params.get("terms", {}).items():
        s = int(key)
        if not 0 <= s < S.n:
            raise ParseError(block.line, f"term index {s} outside the pair semigroup of order {S.n}")
        x = x + LElement(crossed.action, {s: _element(value, algebra, block)}, tol)
    for g, value in block.params.get("deltas", {}).items():
        x = x + crossed.delta_at(g, _element(value, algebra, block), tol)
    return x


RESOLVERS: Dict[str, Callable[[_Context, Block], Any]] = {
    "algebra": _resolve_algebra,
    "ideal": _resolve_ideal,
    "pauto": _resolve_pauto,
    "semigroup": _resolve_semigroup,
    "partial_action": _resolve_partial_action,
    "rep": _resolve_rep,
    "family": _resolve_family,
    "covrep": _resolve_covrep,
    "crossed": _resolve_crossed,
    "lelement": _resolve_lelement,
}


def _verify_check(params: Dict[str, Any], block: Block) -> str:
    """The check named by ``check``, or the one ``theorem`` maps to; both must agree."""
    theorem = params.pop("theorem", None)
    check = params.pop("check", None)
    if theorem is not None:
        mapped = THEOREM_CHECKS.get(str(theorem))
        if mapped is None:
            raise ParseError(block.line, f"unknown theorem '{theorem}'. Supported: {', '.join(THEOREM_CHECKS)}")
        if check is not None and str(check) != mapped:
            raise ParseError(block.line, f"theorem '{theorem}' runs check '{mapped}', not '{check}'")
        return mapped
    if check is None:
        raise ParseError(block.line, "verify block needs a check or a theorem")
    return str(check)

def resolve_scenario(scenario: Scenario) -> ResolvedScenario:
    """Build every named object and bind the verify directives to them.

    Construction failures (bad block maps, non-unitary matrices, tables that
    are not inverse semigroups) are input errors reported at the block's line.

    Raises:
        ParseError, UnresolvedReference
    """
    ctx = _Context()
    resolved = ResolvedScenario(source=scenario.source)
    for block in scenario.blocks:
        if block.kind == "config":
            continue
        if block.kind == "verify":
            params = {k: ctx.resolve_all(v, k) for k, v in block.params.items()}
            check = _verify_check(params, block)
            name = block.name or f"{check}@{block.line}"
            resolved.directives.append(Directive(name=name, check=check, params=params, line=block.line))
            continue
        if not block.name:
            raise ParseError(block.line, f"{block.kind} block needs a name")
        if block.name in ctx.objects:
            raise ParseError(block.line, f"name '{block.name}' is already defined")
        unknown = sorted(set(block.params) - set(ALLOWED_KEYS[block.kind]))
        if unknown:
            raise ParseError(
                block.line,
                f"unknown key(s) {', '.join(unknown)} in {block.kind} block. Supported: {', '.join(ALLOWED_KEYS[block.kind])}",
            )
        try:
            ctx.objects[block.name] = RESOLVERS[block.kind](ctx, block)
        except InputError as exc:
            if isinstance(exc, (ParseError, UnresolvedReference)):
                raise
            raise ParseError(block.line, f"{block.kind} {block.name}: {exc}")
        except (AlgebraError, ValueError, TypeError, KeyError) as exc:
            raise ParseError(block.line, f"{block.kind} {block.name}: {exc}")
    resolved.objects = ctx.objects
    logger.info(f"Resolved {len(ctx.objects)} objects and {len(resolved.directives)} directives from {scenario.source}")
    return resolved
