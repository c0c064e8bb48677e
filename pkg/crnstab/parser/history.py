from __future__ import annotations

from pydantic import ValidationError

from crnstab.data_model.network import HistoryFunction
from crnstab.exceptions import NetworkParseError

CONSTANT_PREFIX = "const:"
EXPRESSION_PREFIX = "expr:"


def parse_history(text: str, n_species: int | None = None) -> HistoryFunction:
    """Read a history spec such as `const:5,1` or `expr:sin(s)+1,cos(s)+1`.

    Args:
        text: The history spec.
        n_species: Expected number of components, checked when given.

    Raises:
        NetworkParseError: if the spec is malformed or has the wrong length.
    """
    spec = text.strip()
    try:
        if spec.startswith(CONSTANT_PREFIX):
            values = [float(v) for v in spec.removeprefix(CONSTANT_PREFIX).split(",")]
            history = HistoryFunction.constant(values)
        elif spec.startswith(EXPRESSION_PREFIX):
            expressions = [e.strip() for e in spec.removeprefix(EXPRESSION_PREFIX).split(",")]
            history = HistoryFunction.expression(expressions)
        else:
            msg = f"History must start with {CONSTANT_PREFIX!r} or {EXPRESSION_PREFIX!r}: {text!r}"
            raise NetworkParseError(msg)
    except (ValueError, ValidationError) as e:
        if isinstance(e, NetworkParseError):
            raise
        msg = f"Invalid history {text!r}: {e}"
        raise NetworkParseError(msg) from e

    if n_species is not None and history.dimension != n_species:
        msg = f"History {text!r} has {history.dimension} components, network has {n_species}"
        raise NetworkParseError(msg)
    return history
