"""
Unit tests for the mdp-values package.
"""
