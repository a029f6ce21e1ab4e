"""Dexterity bounds, Q-axis closed forms and critical-point analysis."""
