"""Workbench for Frobenius algebras, Morita contexts and state-sum invariants."""
