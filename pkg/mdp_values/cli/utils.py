"""Utility functions for the mdp-values CLI."""

import json
import logging
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

import pydantic
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from mdp_values.algebra import parse_rational
from mdp_values.exceptions import ParseError

ModelT = TypeVar("ModelT", bound=pydantic.BaseModel)

# Create console for rich output
console = Console(stderr=True)
# Console for stdout (for table output)
stdout_console = Console()


def configure_logging(verbose: bool) -> None:
    """Route library logging through rich; DEBUG when verbose, warnings otherwise."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def print_json(data: Any) -> None:
    """
    Print data as JSON to stdout.

    Args:
        data: Data to print as JSON
    """
    if hasattr(data, "model_dump"):
        data = data.model_dump(mode="json")
    print(json.dumps(data, indent=2, default=str, ensure_ascii=False))


def print_error(message: str, code: int = 1) -> None:
    """
    Print an error message to stderr and exit with the given status code.
    Uses Rich formatting for better readability.

    Args:
        message: Error message to print
        code: Exit status
    """
    console.print(
        Panel.fit(
            f"[bold red]Error:[/bold red] {escape(message)}",
            border_style="red",
            title="mdp-values",
        )
    )
    raise typer.Exit(code=code)


def load_document(path: Path, model: Type[ModelT]) -> ModelT:
    """
    Read a JSON document and validate it against a model.

    Args:
        path: The file to read
        model: The pydantic model describing the document

    Returns:
        The validated document

    Raises:
        ParseError: If the file is unreadable, not JSON, or does not match the model
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read file: {e.strerror}", source=str(path), original_error=e)
    try:
        return model.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise ParseError(
            f"Not a valid {model.__name__} document:\n{e}",
            source=str(path),
            original_error=e,
        )


def write_document(path: Path, document: pydantic.BaseModel) -> None:
    """Write a model as indented JSON."""
    Path(path).write_text(
        json.dumps(document.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def parse_lambda(text: str) -> Fraction:
    """
    Parse a discount factor given on the command line.

    Raises:
        ParseError: If the text is not a rational in [0, 1)
    """
    try:
        value = parse_rational(text)
    except ValueError as e:
        raise ParseError(f"Invalid discount factor {text!r}", source="--lambda", original_error=e)
    if not 0 <= value < 1:
        raise ParseError(f"Discount factor {text} is outside [0, 1)", source="--lambda")
    return value


def parse_grid(text: Optional[str]) -> Optional[List[Fraction]]:
    """
    Parse a ``lo:hi:step`` grid; both ends are included when they lie in [0, 1).

    Raises:
        ParseError: If the grid is malformed or leaves [0, 1)
    """
    if text is None:
        return None
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError(f"Grid {text!r} must look like lo:hi:step", source="--grid")
    try:
        lo, hi, step = (parse_rational(p) for p in parts)
    except ValueError as e:
        raise ParseError(f"Invalid grid {text!r}", source="--grid", original_error=e)
    if step <= 0 or lo > hi or lo < 0 or hi >= 1:
        raise ParseError(
            f"Grid {text!r} needs 0 <= lo <= hi < 1 and step > 0", source="--grid"
        )
    points = []
    point = lo
    while point <= hi:
        points.append(point)
        point += step
    return points


def with_timestamp(data: Dict[str, Any], timestamps: bool) -> Dict[str, Any]:
    """Add a ``generated_at`` field when timestamps were requested."""
    if timestamps:
        data["generated_at"] = datetime.now(timezone.utc).isoformat()
    return data


def print_values_table(rows: List[Dict[str, Any]]) -> None:
    """
    Print discounted values as a Rich table.

    Args:
        rows: One dict per discount factor, as produced by the value command
    """
    table = Table(title="Discounted Values")
    table.add_column("#", style="dim", width=4)
    table.add_column("λ", style="cyan")
    table.add_column("Value", justify="right", style="green")
    table.add_column("Exact", style="magenta")
    table.add_column("Error Bound", justify="right", style="yellow")

    for i, row in enumerate(rows, 1):
        table.add_row(
            str(i),
            str(row["lambda"]),
            str(row["value"]),
            "Yes" if row["exact"] else "No",
            "-" if row["exact"] else f"{row['error_bound']:.1e}",
        )

    stdout_console.print(table)


def print_analysis_table(report: Any) -> None:
    """
    Print the branches of an analysis report as a Rich table.

    Args:
        report: An AnalysisReport
    """
    table = Table(title=f"Policy Envelope ({report.policy_count} policies)")
    table.add_column("#", style="dim", width=4)
    table.add_column("Policy", style="cyan")
    table.add_column("Value", style="green")
    table.add_column("Unit Roots", style="blue")
    table.add_column("Verdict", style="magenta")

    for i, branch in enumerate(report.branches, 1):
        policy = ", ".join(f"{s}={a}" for s, a in branch.policy.items())
        indices = ", ".join(str(d) for d in branch.denominator.cyclotomic_indices)
        table.add_row(
            str(i), policy, str(branch.value), indices or "-", branch.denominator.verdict
        )

    stdout_console.print(table)
    for lo, hi in report.switchpoints:
        stdout_console.print(f"switchpoint in [{lo}, {hi}] ≈ {float(lo):.12f}")
