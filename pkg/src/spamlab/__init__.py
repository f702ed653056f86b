"""spamlab: a workbench for classifying email subject lines as spam.

Four escalating approaches share one evaluation kit: hand-written Boolean
rules, engineered word/casing/punctuation features, interpretable statistical
models (naive Bayes, logistic regression, decision trees), and random
forests. Exposed as a library, a CLI (``spamlab``), an HTTP service, and a
browser UI.
"""

from .errors import SpamLabError

__version__ = "0.1.0"

__all__ = ["SpamLabError", "__version__"]
