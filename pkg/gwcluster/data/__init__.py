"""Bundled demo lexicons and toy corpus."""
