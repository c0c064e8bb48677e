# ruff: noqa: G004

from __future__ import annotations

import logging
import re
from typing import TYPE_CHECKING, Callable, Literal

import numpy as np
import sympy as sp
from pydantic import BaseModel, ConfigDict, PrivateAttr, model_validator
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

_S = sp.Symbol("s", real=True)
_ALLOWED_TOKENS = re.compile(r"(?:\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+|sin|cos|s|[+\-*/()\s])+")
_ALLOWED_FUNCTIONS = {sp.sin, sp.cos}
_VALIDATION_SAMPLES = 513
_NEAR_ZERO = 1e-4


def _compile_expression(text: str) -> Callable[[np.ndarray], np.ndarray]:
    if not _ALLOWED_TOKENS.fullmatch(text):
        msg = f"History expression {text!r} may only use numbers, s, sin, cos and + - * / ( )"
        raise ValueError(msg)
    expr = parse_expr(
        text,
        local_dict={"s": _S, "sin": sp.sin, "cos": sp.cos},
        transformations=standard_transformations,
    )
    if not expr.free_symbols <= {_S}:
        msg = f"History expression {text!r} depends on symbols other than s"
        raise ValueError(msg)
    functions = {f.func for f in expr.atoms(sp.Function)}
    if not functions <= _ALLOWED_FUNCTIONS:
        msg = f"History expression {text!r} uses unsupported functions {functions}"
        raise ValueError(msg)
    compiled = sp.lambdify(_S, expr, modules="numpy")

    def evaluate(s: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(compiled(s), dtype=float), s.shape)

    return evaluate


class HistoryFunction(BaseModel):
    """Initial data θ on [-τ_max, 0].

    Either a constant positive vector or one expression in `s` per species, built from
    numbers, `sin`, `cos` and arithmetic.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["constant", "expression"]
    values: tuple[float, ...] | None = None
    expressions: tuple[str, ...] | None = None

    _components: list[Callable[[np.ndarray], np.ndarray]] | None = PrivateAttr(default=None)

    @model_validator(mode="after")
    def validate_history_fields(self) -> HistoryFunction:
        if self.kind == "constant":
            if not self.values:
                msg = "Constant history needs at least one value"
                raise ValueError(msg)
            if any(v <= 0 for v in self.values):
                msg = f"Constant history must be strictly positive, got {self.values}"
                raise ValueError(msg)
        else:
            if not self.expressions:
                msg = "Expression history needs one expression per species"
                raise ValueError(msg)
            self._components = [_compile_expression(e) for e in self.expressions]
            if np.any(self(0.0) <= 0):
                msg = f"History must be strictly positive at s=0, got {self(0.0)}"
                raise ValueError(msg)
        return self

    @classmethod
    def constant(cls, values: Sequence[float]) -> HistoryFunction:
        return cls(kind="constant", values=tuple(float(v) for v in values))

    @classmethod
    def expression(cls, expressions: Sequence[str]) -> HistoryFunction:
        return cls(kind="expression", expressions=tuple(expressions))

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    @property
    def dimension(self) -> int:
        return len(self.values) if self.is_constant else len(self.expressions)

    def __call__(self, s: float | np.ndarray) -> np.ndarray:
        """Evaluate θ(s). A scalar gives shape (n,), an array of m times gives (m, n)."""
        s_arr = np.asarray(s, dtype=float)
        if self.is_constant:
            out = np.broadcast_to(np.array(self.values), (*s_arr.shape, self.dimension))
            return np.array(out)
        return np.stack([f(s_arr) for f in self._components], axis=-1)

    def breakpoints(self, lower: float) -> np.ndarray:  # noqa: ARG002
        """Points in (lower, 0) where θ loses smoothness; histories here are analytic."""
        return np.empty(0)

    def validate_on(self, tau_max: float) -> None:
        """Check θ is non-negative on [-tau_max, 0] and positive at 0.

        A history that touches zero inside the interval is accepted with a warning: the
        delayed dynamics are defined on the non-negative cone.
        """
        if self.is_constant or tau_max <= 0:
            return
        samples = self(np.linspace(-tau_max, 0.0, _VALIDATION_SAMPLES))
        if np.any(samples < 0):
            msg = f"History {self.describe()} is negative somewhere on [-{tau_max}, 0]"
            raise ValueError(msg)
        if np.any(samples < _NEAR_ZERO):
            logger.warning(f"History {self.describe()} touches zero on [-{tau_max}, 0]")

    def scaled(self, factors: Sequence[float]) -> HistoryFunction:
        """History multiplied componentwise by positive factors."""
        if len(factors) != self.dimension:
            msg = f"Got {len(factors)} factors for a {self.dimension}-species history"
            raise ValueError(msg)
        if self.is_constant:
            return HistoryFunction.constant([v * f for v, f in zip(self.values, factors)])
        return HistoryFunction.expression(
            [f"({e})*{_format_number(f)}" for e, f in zip(self.expressions, factors)]
        )

    def describe(self) -> str:
        return format_history(self)


def format_history(history: HistoryFunction) -> str:
    """Canonical `const:`/`expr:` text for a history."""
    if history.is_constant:
        return "const:" + ",".join(_format_number(v) for v in history.values)
    return "expr:" + ",".join(history.expressions)


def _format_number(value: float) -> str:
    return repr(float(value)).removesuffix(".0")
