"""Tests for mixrisk."""
