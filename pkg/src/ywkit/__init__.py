"""Exact verification toolkit for Yangians, twisted Yangians and their modules."""

from __future__ import annotations

__version__ = "0.1.0"
