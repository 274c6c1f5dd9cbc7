"""Toolkit for annotating, validating, and benchmarking errors in
automatically simplified text.

Layout mirrors the processing stages:

- `taxonomy`: the 14-code error checklist, categories, label vectors
- `facts`: fact-triple algebra deriving error/transformation sets
- `facts_io`: the fact-universe fixture format
- `collection`: the delimited annotation format and its statistics
- `agreement`: Cohen/Fleiss kappa and unanimity over shared items
- `detectors`: AUROC/AUPRC benchmarking of external detectors
- `service`: annotation task service with a durable event log
- `fixtures`: deterministic synthetic data for tests and demos
- `cli`: the ``simperr`` command
"""

__version__ = "0.1.0"
