"""Exact computations with flags, opposition graphs and EKR sets in finite
classical polar spaces."""

__version__ = "0.1.0"

# canonical ordering of subspaces, flags and graph vertices; embedded in
# every report so downstream consumers can detect scheme changes
ORDERING_SCHEME = "rref-lex-v1"
