"""Domain and map descriptors (JSON objects) to library values."""
from __future__ import annotations

import json
import os

from .domain import ReinhardtDomain, TheoremI, TheoremII, TheoremIII, _parse_R, custom_from_expr
from .expr import ExpressionError
from .monomial import MonomialMap
from .normal_forms import NormalForm, as_domain


class DescriptorError(ValueError):
    pass


def load_json_arg(text: str):
    """Inline JSON, or ``@path`` for a file."""
    try:
        if text.startswith("@"):
            with open(os.path.expanduser(text[1:]), encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(text)
    except OSError as exc:
        raise DescriptorError(f"cannot read {text[1:]!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"malformed JSON: {exc.msg} at position {exc.pos}") from None


def _num(obj, key, required=True, default=None):
    if key not in obj:
        if required:
            raise DescriptorError(f"descriptor is missing {key!r}")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise DescriptorError(f"{key!r} must be a number, got {v!r}")
    return float(v)


def _R(obj, default="inf"):
    v = obj.get("R", default)
    if isinstance(v, bool):
        raise DescriptorError("'R' must be a number or 'inf'")
    try:
        return _parse_R(v)
    except (TypeError, ValueError) as exc:
        raise DescriptorError(str(exc)) from None


def parse_normal_form(obj) -> NormalForm:
    if not isinstance(obj, dict):
        raise DescriptorError("normal form descriptor must be a JSON object")
    form = obj.get("form")
    if isinstance(form, bool) or not isinstance(form, int):
        raise DescriptorError("'form' must be an integer 11..15")
    try:
        return NormalForm(form, _num(obj, "alpha", False), _num(obj, "beta", False),
                          _num(obj, "r", False), _R(obj, 1.0))
    except ValueError as exc:
        raise DescriptorError(str(exc)) from None


def parse_domain(obj) -> ReinhardtDomain:
    """Build a domain from ``{"kind": ..., ...}``."""
    if not isinstance(obj, dict):
        raise DescriptorError("domain descriptor must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "theorem_i":
            return TheoremI(_num(obj, "alpha"))
        if kind == "theorem_ii":
            return TheoremII(_num(obj, "alpha"), _R(obj))
        if kind == "theorem_iii":
            return TheoremIII(_num(obj, "beta"), _R(obj))
        if kind == "normal_form":
            return as_domain(parse_normal_form(obj))
        if kind == "custom":
            expr = obj.get("expr")
            if not isinstance(expr, str) or not expr.strip():
                raise DescriptorError("custom domain needs a non-empty 'expr'")
            flags = []
            for key in ("axis1", "axis2"):
                v = obj.get(key, False)
                if not isinstance(v, bool):
                    raise DescriptorError(f"{key!r} must be true or false")
                flags.append(v)
            from .gallery import EXAMPLE1_EXPR, example1_domain

            if expr.strip() == EXAMPLE1_EXPR and flags == [False, False] and "log_box" not in obj:
                return example1_domain()  # same g, compiled kernel
            return custom_from_expr(expr, flags[0], flags[1], obj.get("log_box"))
    except ExpressionError as exc:
        raise DescriptorError(f"bad expression: {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DescriptorError):
            raise
        raise DescriptorError(str(exc)) from None
    raise DescriptorError(f"unknown domain kind {kind!r}")


def parse_map(obj) -> MonomialMap:
    if not isinstance(obj, dict):
        raise DescriptorError("map descriptor must be a JSON object")
    try:
        return MonomialMap.from_json(obj)
    except (TypeError, ValueError) as exc:
        raise DescriptorError(f"bad map: {exc}") from None
