from __future__ import annotations

import ast
from typing import Any

import numpy as np

ALLOWED_FUNCTIONS = {
    "abs": np.abs,
    "min": np.minimum,
    "max": np.maximum,
    "gcd": np.gcd,
}

_OPERATORS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Mod, ast.FloorDiv, ast.UAdd, ast.USub)

FORMULA_VARIABLES = ("a", "b", "n")

# Families of operations on Z/n written as the formula they evaluate.
FAMILY_FORMULAS = {
    "trivial": {"expression": "a", "variables": ["a", "b"]},
    "dihedral": {"expression": "2*b - a", "variables": ["a", "b"]},
    "alexander": {"expression": "t*a + (1 - t)*b", "variables": ["a", "b", "t"]},
}


class _FormulaChecker(ast.NodeVisitor):
    """Collects every reason an expression tree is not a plain integer formula."""

    def __init__(self, names: set[str]):
        self.names = names
        self.problems: set[str] = set()

    def generic_visit(self, node: ast.AST) -> None:
        if not isinstance(node, (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Load, *_OPERATORS)):
            self.problems.add(f"Unsupported expression element: {type(node).__name__}")
            return
        super().generic_visit(node)

    def visit_Name(self, node: ast.Name) -> None:
        if node.id not in self.names:
            self.problems.add(f"Variable '{node.id}' is not declared in variables list.")

    def visit_Constant(self, node: ast.Constant) -> None:
        if type(node.value) is not int:
            self.problems.add("Only integer constants are allowed in formulas.")

    def visit_Call(self, node: ast.Call) -> None:
        if not (isinstance(node.func, ast.Name) and node.func.id in ALLOWED_FUNCTIONS):
            self.problems.add(f"Only safe functions are allowed ({', '.join(ALLOWED_FUNCTIONS)}).")
        if node.keywords:
            self.problems.add("Keyword arguments are not allowed in formulas.")
        for argument in node.args:
            self.visit(argument)


def validate_formula_expression(expression: str, variables: list[str] | tuple[str, ...]) -> list[str]:
    try:
        tree = ast.parse(expression, mode="eval")
    except SyntaxError as exc:
        return [f"Invalid formula syntax: {exc.msg}"]
    checker = _FormulaChecker(set(variables) | set(ALLOWED_FUNCTIONS))
    checker.visit(tree)
    return sorted(checker.problems)


def safe_eval_formula(expression: str, values: dict[str, Any]) -> Any:
    problems = validate_formula_expression(expression, list(values))
    if problems:
        raise ValueError("; ".join(problems))
    code = compile(ast.parse(expression, mode="eval"), "<formula>", "eval")
    return eval(code, {"__builtins__": {}}, {**ALLOWED_FUNCTIONS, **values})  # noqa: S307


_EXACT_POWER_BITS = 4096


def _bounded_pow(base: int, exponent: int) -> int:
    base, exponent = int(base), int(exponent)
    if exponent < 0:
        raise ValueError("A power used as an exponent must have a non-negative exponent.")
    if exponent > 0 and abs(base) > 1 and base.bit_length() * exponent > _EXACT_POWER_BITS:
        raise ValueError(f"Exponent {base}**{exponent} is too large to evaluate exactly.")
    return base**exponent


_EXACT_POWER = np.frompyfunc(_bounded_pow, 2, 1)


class _ModularPower(ast.NodeTransformer):
    """Rewrites ``x ** e`` into a call that reduces while exponentiating.

    Exponents are integers, not residues, so powers inside an exponent stay exact.
    """

    def __init__(self) -> None:
        self.exact = False

    def visit_BinOp(self, node: ast.BinOp) -> ast.AST:
        if not isinstance(node.op, ast.Pow):
            self.generic_visit(node)
            return node
        node.left = self.visit(node.left)
        outer, self.exact = self.exact, True
        node.right = self.visit(node.right)
        self.exact = outer
        name = "__powexact__" if self.exact else "__powmod__"
        call = ast.Call(func=ast.Name(id=name, ctx=ast.Load()), args=[node.left, node.right], keywords=[])
        return ast.copy_location(call, node)


def formula_table(expression: str, modulus: int, extra: dict[str, int] | None = None) -> np.ndarray:
    """Evaluate ``expression`` at every pair ``(a, b)`` of ``Z/modulus``, reduced mod ``modulus``.

    Cells hold Python integers until the final reduction, and powers are taken mod
    ``modulus``, so no intermediate value wraps around.
    """
    variables = ["a", "b", "n", *(extra or {})]
    problems = validate_formula_expression(expression, variables)
    if problems:
        raise ValueError("; ".join(problems))

    tree = ast.fix_missing_locations(_ModularPower().visit(ast.parse(expression, mode="eval")))
    powmod = np.frompyfunc(lambda base, exponent: pow(int(base), int(exponent), modulus), 2, 1)
    grid = np.arange(modulus).astype(object)
    scope: dict[str, Any] = {**ALLOWED_FUNCTIONS, "a": grid[:, None], "b": grid[None, :], "n": modulus}
    scope.update(extra or {})
    scope["__powmod__"] = powmod
    scope["__powexact__"] = _EXACT_POWER
    result = eval(compile(tree, "<formula>", "eval"), {"__builtins__": {}}, scope)  # noqa: S307
    cells = np.broadcast_to(np.asarray(result, dtype=object), (modulus, modulus)) % modulus
    return cells.astype(np.int64)
