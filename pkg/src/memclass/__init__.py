"""Memory-forensics malware classification: ingest, feature engineering,
seven from-scratch classifiers, evaluation and model files."""

__version__ = "0.1.0"
