"""Package version, kept in sync with pyproject."""

VERSION = "0.1.0"
