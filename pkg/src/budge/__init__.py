"""Budge-PL, a Gödel-numbered register language, and Budge-TP, a substitution proof checker."""

__version__ = "0.1.0"
