"""Tests for the G2A Coverage Planner."""
