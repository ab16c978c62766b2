"""Generate, score, store and exchange DCAT-AP dataset metadata."""

__version__ = "0.1.0"
