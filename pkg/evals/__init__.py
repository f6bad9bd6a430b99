"""Shipped experiment configs and the claims runner for Least Energy Lab."""
