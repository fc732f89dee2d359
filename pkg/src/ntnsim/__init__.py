"""Monte-Carlo simulator for non-terrestrial network system-level metrics."""

__version__ = "0.1.0"
