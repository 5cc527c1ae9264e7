"""Version information for pgex package."""

__version__ = "0.1.0"
