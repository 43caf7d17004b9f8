"""Command-line interface for mdp-values."""

from pathlib import Path
from typing import Optional

import typer

from mdp_values import __version__, constants
from mdp_values.analyzer import AUTO, analyze, verify, verify_exact, verify_numeric
from mdp_values.cli.utils import (
    configure_logging,
    load_document,
    parse_grid,
    parse_lambda,
    print_analysis_table,
    print_error,
    print_json,
    print_values_table,
    with_timestamp,
    write_document,
)
from mdp_values.exceptions import MdpValuesError, ValidationError
from mdp_values.mdp import Mdp, as_degenerate, determinize_initial, is_degenerate, require_valid
from mdp_values.solver import Policy, policy_value_at, value_iteration
from mdp_values.synthesis import (
    MaxFSpec,
    approximate_spec,
    branch_spec,
    check_spec,
    synth_max,
    synthesize,
    synthesize_branches,
)

app = typer.Typer(
    name="mdp-values",
    help="Exact value functions of discounted MDPs, and MDPs synthesized from value functions",
    add_completion=False,
)


def version_callback(value: bool):
    """Show version and exit."""
    if value:
        typer.echo(f"mdp-values version: {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show the application version and exit.",
    ),
    verbose: bool = typer.Option(
        False, "--verbose", help="Log construction and search progress to stderr."
    ),
):
    """
    mdp-values CLI - analyze, synthesize and verify discounted MDP value functions
    """
    configure_logging(verbose)


def _load_spec(path: Path, approx_factor: bool) -> tuple:
    """Load a spec, check it, and factor raw branches when allowed."""
    spec = load_document(path, MaxFSpec)
    violations = check_spec(spec, allow_raw=approx_factor)
    if violations:
        raise ValidationError(f"Invalid target specification {path}.", violations=violations)
    approximated = not spec.factored
    if approximated:
        factored = approximate_spec(spec)
        violations = check_spec(factored)
        if violations:
            raise ValidationError(
                f"Approximate factorization of {path} is not admissible.", violations=violations
            )
        return spec, factored, approximated
    return spec, spec, approximated


@app.command("check-spec")
def cmd_check_spec(
    spec_file: Path = typer.Argument(..., help="Target specification JSON file."),
    approx_factor: bool = typer.Option(
        False, "--approx-factor", help="Accept unfactored denominators."
    ),
) -> None:
    """
    Check a target specification and itemize every violation.

    Exits with status 2 when the specification is invalid.
    """
    try:
        spec = load_document(spec_file, MaxFSpec)
    except MdpValuesError as e:
        print_error(str(e), e.exit_code)
    violations = check_spec(spec, allow_raw=approx_factor)
    print_json({"valid": not violations, "violations": violations})
    if violations:
        raise typer.Exit(code=ValidationError.exit_code)


@app.command("synth")
def cmd_synth(
    spec_file: Path = typer.Argument(..., help="Target specification JSON file."),
    out_file: Path = typer.Argument(..., help="Where to write the synthesized MDP."),
    gadget_bound: int = typer.Option(
        constants.GADGET_BOUND, "--gadget-bound", help="Largest exponent searched for root gadgets."
    ),
    approx_factor: bool = typer.Option(
        False, "--approx-factor", help="Factor raw denominators numerically first."
    ),
    timestamps: bool = typer.Option(False, "--timestamps", help="Add a generation time."),
) -> None:
    """
    Synthesize an MDP whose value function is the target maximum.

    The MDP is written to OUT_FILE and a synthesis report, listing every
    construction and gadget certificate, is printed.
    """
    try:
        _, spec, approximated = _load_spec(spec_file, approx_factor)
        mdp, report = synthesize(spec, bound=gadget_bound)
        write_document(out_file, mdp)
    except MdpValuesError as e:
        print_error(str(e), e.exit_code)
    data = report.model_dump(mode="json")
    data["approximated"] = approximated
    print_json(with_timestamp(data, timestamps))


@app.command("value")
def cmd_value(
    mdp_file: Path = typer.Argument(..., help="MDP JSON file."),
    lam: Optional[str] = typer.Option(
        None, "--lambda", "-l", help="Rational discount factor in [0, 1), e.g. 1/2."
    ),
    grid: Optional[str] = typer.Option(None, "--grid", help="Grid of discount factors lo:hi:step."),
    epsilon: float = typer.Option(
        constants.VALUE_ITERATION_EPSILON, "--epsilon", help="Certified value-iteration error."
    ),
    output_format: str = typer.Option(
        "json",
        "--format",
        "-f",
        help="Output format: 'json' for raw JSON, 'table' for a formatted table",
    ),
) -> None:
    """
    Compute discounted values at one or more discount factors.

    Degenerate MDPs get exact rational values; other MDPs get value-iteration
    values with a certified error bound. Without --lambda or --grid the
    default 99-point grid is used.
    """
    try:
        m = load_document(mdp_file, Mdp)
        require_valid(m)
        if lam is not None:
            points = [parse_lambda(lam)]
        else:
            points = parse_grid(grid) or list(constants.DEFAULT_GRID)
        rows = []
        exact = is_degenerate(m)
        for point in points:
            if exact:
                chain = as_degenerate(m)
                values = policy_value_at(chain, Policy.first(chain), point)
                total = sum((w * values[s] for s, w in chain.initial.items()), 0)
                rows.append(
                    {
                        "lambda": str(point),
                        "value": str(total),
                        "exact": True,
                        "values": {s: str(v) for s, v in values.items()},
                    }
                )
            else:
                result = value_iteration(m, float(point), epsilon)
                rows.append(
                    {
                        "lambda": str(point),
                        "value": result.initial,
                        "exact": False,
                        "error_bound": result.error_bound,
                        "iterations": result.iterations,
                        "values": result.values,
                    }
                )
    except MdpValuesError as e:
        print_error(str(e), e.exit_code)
    if output_format == "table":
        print_values_table(rows)
    else:
        print_json({"results": rows})


@app.command("analyze")
def cmd_analyze(
    mdp_file: Path = typer.Argument(..., help="MDP JSON file."),
    cap: int = typer.Option(constants.POLICY_CAP, "--cap", help="Maximum number of policies."),
    switchpoints: bool = typer.Option(
        True, "--switchpoints/--no-switchpoints", help="Isolate envelope switchpoints."
    ),
    output_format: str = typer.Option(
        "json",
        "--format",
        "-f",
        help="Output format: 'json' for raw JSON, 'table' for a formatted table",
    ),
    timestamps: bool = typer.Option(False, "--timestamps", help="Add a generation time."),
) -> None:
    """
    Enumerate all pure stationary policies and certify every branch value.

    Exits with status 1 when some branch denominator is inadmissible.
    """
    try:
        m = load_document(mdp_file, Mdp)
        report = analyze(m, cap=cap, switchpoints=switchpoints)
    except MdpValuesError as e:
        print_error(str(e), e.exit_code)
    if output_format == "table":
        print_analysis_table(report)
    else:
        print_json(with_timestamp(report.model_dump(mode="json"), timestamps))
    if not report.admissible:
        raise typer.Exit(code=1)


@app.command("verify")
def cmd_verify(
    mdp_file: Path = typer.Argument(..., help="MDP JSON file."),
    spec_file: Path = typer.Argument(..., help="Target specification JSON file."),
    tier: str = typer.Option(AUTO, "--tier", help="Verification tier: exact, numeric or auto."),
    tol: float = typer.Option(constants.TOLERANCE, "--tol", help="Numeric tolerance."),
    grid: Optional[str] = typer.Option(None, "--grid", help="Grid of discount factors lo:hi:step."),
    approx_factor: bool = typer.Option(
        False, "--approx-factor", help="Factor raw denominators numerically first."
    ),
    timestamps: bool = typer.Option(False, "--timestamps", help="Add a generation time."),
) -> None:
    """
    Verify an MDP's value function against a target specification.

    Exits with status 1 when verification fails.
    """
    try:
        m = load_document(mdp_file, Mdp)
        _, spec, _ = _load_spec(spec_file, approx_factor)
        points = parse_grid(grid) or list(constants.DEFAULT_GRID)
        report = verify(m, spec, tier=tier, grid=points, tol=tol)
    except MdpValuesError as e:
        print_error(str(e), e.exit_code)
    print_json(with_timestamp(report.model_dump(mode="json"), timestamps))
    if not report.passed:
        raise typer.Exit(code=1)


@app.command("roundtrip")
def cmd_roundtrip(
    spec_file: Path = typer.Argument(..., help="Target specification JSON file."),
    gadget_bound: int = typer.Option(
        constants.GADGET_BOUND, "--gadget-bound", help="Largest exponent searched for root gadgets."
    ),
    tol: float = typer.Option(constants.TOLERANCE, "--tol", help="Numeric tolerance."),
    grid: Optional[str] = typer.Option(None, "--grid", help="Grid of discount factors lo:hi:step."),
    approx_factor: bool = typer.Option(
        False, "--approx-factor", help="Factor raw denominators numerically first."
    ),
    timestamps: bool = typer.Option(False, "--timestamps", help="Add a generation time."),
) -> None:
    """
    Synthesize a specification and verify the result.

    Each branch is verified exactly and the envelope numerically. With
    --approx-factor the exact tier checks the approximated specification and
    the numeric tier the original one.
    """
    try:
        original, spec, approximated = _load_spec(spec_file, approx_factor)
        points = parse_grid(grid) or list(constants.DEFAULT_GRID)
        built = synthesize_branches(spec, bound=gadget_bound)
        exact = [
            verify_exact(mdp, branch_spec(branch.numerator, branch.denominator))
            for (mdp, _), branch in zip(built, spec.branches)
        ]
        mdps = [mdp for mdp, _ in built]
        combined = mdps[0] if len(mdps) == 1 else synth_max(mdps)
        numeric = verify_numeric(combined, original, grid=points, tol=tol)
    except MdpValuesError as e:
        print_error(str(e), e.exit_code)
    passed = numeric.passed and all(report.passed for report in exact)
    data = {
        "verdict": "pass" if passed else "fail",
        "approximated": approximated,
        "states": len(combined.states),
        "exact": [report.model_dump(mode="json") for report in exact],
        "numeric": numeric.model_dump(mode="json"),
    }
    print_json(with_timestamp(data, timestamps))
    if not passed:
        raise typer.Exit(code=1)


@app.command("determinize")
def cmd_determinize(
    mdp_file: Path = typer.Argument(..., help="MDP JSON file."),
    out_file: Path = typer.Argument(..., help="Where to write the determinized MDP."),
    max_support: int = typer.Option(
        constants.DETERMINIZE_MAX_SUPPORT, "--max-support", help="Largest initial support handled."
    ),
) -> None:
    """
    Concentrate the initial distribution on a single new start state.
    """
    try:
        m = load_document(mdp_file, Mdp)
        result = determinize_initial(m, max_support=max_support)
        write_document(out_file, result)
    except MdpValuesError as e:
        print_error(str(e), e.exit_code)
    start = result.states[0]
    print_json(
        {
            "start": start,
            "states": len(result.states),
            "start_actions": len(result.actions[start]),
            "degenerate": is_degenerate(result),
        }
    )


if __name__ == "__main__":  # pragma: no cover
    app()
