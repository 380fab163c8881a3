"""Verification and counterexample search for proportional committee elections."""

__version__ = "0.1.0"
