"""
jacobi package: the time-dependent Jacobi weight and its integrable structure
"""
