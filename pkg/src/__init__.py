"""Subshift algebra toolkit package."""
