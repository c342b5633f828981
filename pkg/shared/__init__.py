"""
shared package: constants, errors, precision contexts, report protocol
"""
