"""
Collatz-type transformation on binary polynomials: library, CLI and HTTP API
"""
