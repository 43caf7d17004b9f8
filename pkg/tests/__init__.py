"""
Test suite for the mdp-values package.
"""
