"""Non-messing-up posets: chain-cover sorting, verification and classification."""

__version__ = "0.1.0"
