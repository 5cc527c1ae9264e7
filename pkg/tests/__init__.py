"""Test suite for pgex."""
