"""Compile annotated transcriptions of Chambers' 1728 vocabulary into SKOS and OWL."""

__version__ = "0.1.0"
