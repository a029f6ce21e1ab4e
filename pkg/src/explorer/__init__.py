"""Numerical oracles: SVD factors, grid scans, workspace volumes."""
