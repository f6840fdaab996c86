"""Library modules of the common-neighbor sparsification toolkit."""
