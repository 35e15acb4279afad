# main_utils.py

from typing import Any, List, Mapping, Optional

from errors import ConfigError
from logic.declarations import Declarations, load_declarations


def format_key_values(values: Mapping[str, Any], prefix: str = "") -> str:
    """Machine-readable output: one key=value per line, floats with 6 decimals"""
    lines = []
    for key, value in values.items():
        if isinstance(value, float):
            value = f"{value:.6f}"
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{prefix}{key}={value}")
    return "\n".join(lines)


def format_banner(title: str, width: int = 60) -> str:
    return "\n".join(["=" * width, f"  {title}", "=" * width])


def parse_number_list(value: str, cast=float) -> List:
    """'1, 2,3' -> [1, 2, 3] using `cast`; raises ConfigError on a bad entry"""
    items = [v.strip() for v in value.split(",") if v.strip()]
    try:
        return [cast(v) for v in items]
    except ValueError:
        raise ConfigError(f"Invalid number list '{value}'")


def resolve_declarations(path: Optional[str], query_predicate: Optional[str]) -> Declarations:
    """
    Load the declarations file and settle the query predicate: the command-line
    flag wins over a `query` statement in the file.

    Raises:
        ConfigError: no declarations file, or no query predicate from either source
    """
    if not path:
        raise ConfigError("A declarations file is required (--declarations)")
    try:
        declarations = load_declarations(path)
    except OSError as e:
        raise ConfigError(f"Cannot read declarations file: {e}") from e
    query = query_predicate or declarations.query_predicate
    if not query:
        raise ConfigError("No query predicate: pass --query or add 'query Pred.' to the declarations")
    if not declarations.schema.has_predicate(query):
        raise ConfigError(f"Query predicate '{query}' is not declared")
    return Declarations(declarations.schema, declarations.modes, query)
