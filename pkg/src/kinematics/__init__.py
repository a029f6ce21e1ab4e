"""Orthoglide kinematics: geometry, inverse/direct models, inverse Jacobian."""
