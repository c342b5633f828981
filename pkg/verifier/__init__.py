"""
verifier package initialization
"""
