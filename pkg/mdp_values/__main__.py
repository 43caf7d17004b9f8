"""Entry point for ``python -m mdp_values``."""

from mdp_values.cli.main import app

app()
