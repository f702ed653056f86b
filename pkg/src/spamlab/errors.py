"""Shared exception base for the workbench.

Every user-facing failure raised by the library derives from SpamLabError so
the CLI and HTTP layers can distinguish "your input is wrong" (exit 1 / 4xx)
from genuine internal defects (exit 2 / 500).
"""


class SpamLabError(Exception):
    """Base class for all expected, user-correctable errors."""
