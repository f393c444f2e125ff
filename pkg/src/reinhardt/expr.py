"""Closed-form expression mini-language for custom defining functions.

Grammar is Python's expression syntax restricted to numbers, the declared
variables, ``pi``/``e``, ``+ - * /``, ``^`` (power; ``**`` also accepted) and
the functions exp, log, sin, abs, min, max. Evaluation is vectorized numpy
with IEEE semantics (``log(0) = -inf`` etc.).
"""
import ast
import math

import numpy as np

_FUNCS = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "abs": np.abs,
}
_NARY = {"min": np.fmin, "max": np.fmax}
_CONSTS = {"pi": math.pi, "e": math.e}


class ExpressionError(ValueError):
    pass


def _check(node, names):
    if isinstance(node, ast.Expression):
        return _check(node.body, names)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
        return
    if isinstance(node, ast.Name):
        if node.id not in names and node.id not in _CONSTS:
            raise ExpressionError(f"unknown name {node.id!r}")
        return
    if isinstance(node, ast.BinOp):
        if not isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
            raise ExpressionError(f"unsupported operator {type(node.op).__name__}")
        _check(node.left, names)
        _check(node.right, names)
        return
    if isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise ExpressionError("unsupported unary operator")
        _check(node.operand, names)
        return
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise ExpressionError("only plain function calls are allowed")
        fname = node.func.id
        if fname in _FUNCS:
            if len(node.args) != 1:
                raise ExpressionError(f"{fname} takes one argument")
        elif fname in _NARY:
            if len(node.args) < 2:
                raise ExpressionError(f"{fname} takes at least two arguments")
        else:
            raise ExpressionError(f"unknown function {fname!r}")
        for a in node.args:
            _check(a, names)
        return
    raise ExpressionError(f"unsupported syntax: {type(node).__name__}")


def _eval(node, env):
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return env[node.id] if node.id in env else _CONSTS[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval(node.left, env), _eval(node.right, env)
        op = node.op
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            return np.divide(a, b)
        return np.power(a, b)
    fname = node.func.id
    args = [_eval(a, env) for a in node.args]
    if fname in _FUNCS:
        return _FUNCS[fname](args[0])
    out = args[0]
    for a in args[1:]:
        out = _NARY[fname](out, a)
    return out


class Expression:
    """A compiled expression; call with keyword arrays for each variable."""

    def __init__(self, source, variables=("m1", "m2")):
        self.source = source
        self.variables = tuple(variables)
        try:
            # '^' would parse as xor, which binds looser than '+'
            tree = ast.parse(source.strip().replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {source!r}: {exc.msg}") from None
        _check(tree, set(self.variables))
        self._tree = tree.body

    def __call__(self, *args, **kwargs):
        env = dict(zip(self.variables, args))
        env.update(kwargs)
        missing = set(self.variables) - set(env)
        if missing:
            raise ExpressionError(f"missing variables {sorted(missing)}")
        arrays = {k: np.asarray(v, dtype=np.float64) for k, v in env.items()}
        with np.errstate(all="ignore"):
            out = _eval(self._tree, arrays)
        shape = np.broadcast_shapes(*(a.shape for a in arrays.values()))
        return np.broadcast_to(np.asarray(out, dtype=np.float64), shape).copy()

    def __repr__(self):
        return f"Expression({self.source!r})"
