"""mdp-values CLI package."""
