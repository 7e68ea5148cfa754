"""Telemetry-driven detection and interactive labeling of disruptive players."""

__version__ = "0.1.0"
