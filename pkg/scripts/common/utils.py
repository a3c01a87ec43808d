import json
import logging
import math
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np
import pandas as pd

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


class OpticalActivityError(Exception):
    """Base class for errors raised by the optical activity engine."""


class ValidationError(OpticalActivityError, ValueError):
    """Raised when an input violates an operation's preconditions."""


class SeriesConvergenceError(OpticalActivityError, ArithmeticError):
    """Raised when a truncated series does not reach its tolerance."""


class NumericalOverflowError(OpticalActivityError, ArithmeticError):
    """Raised when a computed result leaves the finite floating-point range."""


class NumericDefaults:
    SERIES_TOL = 1e-14
    SERIES_MAX_TERMS = 64
    # the scaled series argument is kept at or below this Frobenius norm
    SERIES_SCALE_NORM = 0.5
    CLASSIFY_REL_TOL = 1e-9
    CLASSIFY_ABS_FLOOR = 1e-30
    # below this value of |gamma^2 - mu^2| * z^2 the closed form uses its series
    SMALL_ARGUMENT = 1e-8
    UNIMODULAR_TOL = 1e-9
    LIGHT_CONE_GUARD = 1e-16
    FLOAT_FORMAT = '%.17g'


class ValidationUtils:
    @staticmethod
    def require_finite(**values: float) -> None:
        """Reject NaN or infinite keyword values, naming the offender."""
        for name, value in values.items():
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")

    @staticmethod
    def require_non_negative(**values: float) -> None:
        for name, value in values.items():
            if value < 0:
                raise ValidationError(f"{name} must be >= 0, got {value!r}")

    @staticmethod
    def require_positive(**values: float) -> None:
        for name, value in values.items():
            if value <= 0:
                raise ValidationError(f"{name} must be > 0, got {value!r}")

    @staticmethod
    def require_count(name: str, value: int, minimum: int) -> None:
        if value < minimum:
            raise ValidationError(f"{name} must be >= {minimum}, got {value!r}")

    @staticmethod
    def require_finite_result(name: str, values: Any) -> None:
        """Raise NumericalOverflowError when a computed result holds inf or NaN."""
        if not np.all(np.isfinite(np.asarray(values, dtype=float))):
            raise NumericalOverflowError(f"{name} is not finite")


class OutputUtils:
    @staticmethod
    def clean_number(value: Any) -> Optional[float]:
        """Convert numpy scalars to float, map -0.0 to 0.0 and non-finite to None."""
        value = float(value)
        if not math.isfinite(value):
            return None
        return value + 0.0

    @staticmethod
    def format_number(value: Any) -> str:
        cleaned = OutputUtils.clean_number(value)
        if cleaned is None:
            return 'null'
        return NumericDefaults.FLOAT_FORMAT % cleaned

    @staticmethod
    def to_json(obj: Any) -> str:
        """
        Render a report as JSON with 17 significant digits per number.

        The layout matches json.dumps(obj, indent=2); only float rendering
        differs. Integers (but not bools) are rendered as floats too, so a
        field keeps one textual form whatever type produced it.

        Args:
            obj: nested dicts, lists, tuples, strings, numbers, bools and None

        Returns:
            str: the document, terminated by a newline
        """
        return OutputUtils._render(obj, 0) + '\n'

    @staticmethod
    def _render(obj: Any, depth: int) -> str:
        indent = '  ' * (depth + 1)
        closing = '  ' * depth
        if obj is None or isinstance(obj, (bool, np.bool_)):
            return json.dumps(None if obj is None else bool(obj))
        if isinstance(obj, str):
            return json.dumps(obj)
        if isinstance(obj, (int, float, np.integer, np.floating)):
            return OutputUtils.format_number(obj)
        if isinstance(obj, dict):
            if not obj:
                return '{}'
            items = [
                f"{indent}{json.dumps(str(key))}: {OutputUtils._render(value, depth + 1)}"
                for key, value in obj.items()
            ]
            return '{\n' + ',\n'.join(items) + '\n' + closing + '}'
        if isinstance(obj, (list, tuple, np.ndarray)):
            if len(obj) == 0:
                return '[]'
            items = [f"{indent}{OutputUtils._render(value, depth + 1)}" for value in obj]
            return '[\n' + ',\n'.join(items) + '\n' + closing + ']'
        raise TypeError(f"Cannot render {type(obj).__name__} as JSON")

    @staticmethod
    def rows_to_frame(rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
        """Build a DataFrame with a fixed column order and cleaned floats."""
        df = pd.DataFrame(list(rows), columns=list(columns))
        for column in df.columns:
            if pd.api.types.is_float_dtype(df[column]):
                df[column] = df[column] + 0.0
        return df

    @staticmethod
    def write_csv(rows: Iterable[Dict[str, Any]], columns: Sequence[str], stream: TextIO) -> None:
        df = OutputUtils.rows_to_frame(rows, columns)
        df.to_csv(
            stream,
            index=False,
            float_format=NumericDefaults.FLOAT_FORMAT,
            lineterminator='\n',
        )

    @staticmethod
    def write_json(obj: Any, stream: TextIO) -> None:
        stream.write(OutputUtils.to_json(obj))

    @staticmethod
    def write_error(kind: str, message: str, stream: Optional[TextIO] = None) -> None:
        """Emit a machine-readable error object, one per line."""
        stream = sys.stderr if stream is None else stream
        stream.write(json.dumps({'error': kind, 'message': message}, sort_keys=True) + '\n')

    @staticmethod
    def matrix_rows(matrix: np.ndarray) -> List[List[float]]:
        return [[float(value) for value in row] for row in np.asarray(matrix)]


def configure_logging(level: str = 'WARNING') -> None:
    """Configure the root logger on stderr with the project-wide format."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
