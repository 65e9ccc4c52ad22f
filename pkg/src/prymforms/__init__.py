"""Exact Prym eigenform surfaces and their deformations."""
