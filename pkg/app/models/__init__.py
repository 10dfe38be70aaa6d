"""
Pydantic models for the GF(2) Collatz toolkit.
"""
