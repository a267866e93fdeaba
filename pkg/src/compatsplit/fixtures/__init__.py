"""Shipped manifest fixtures; load with importlib.resources."""
