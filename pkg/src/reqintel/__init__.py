"""reqintel: continuous user-feedback collection, classification, and analytics."""

__version__ = "0.1.0"
