"""Design strategies and two-stage scaling."""
