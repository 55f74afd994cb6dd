"""Computational toolkit for finite matrix groups over finite fields and the
explicit constants attached to their structure theory."""

__version__ = "0.1.0"
