"""
Services

Sampling, discretization and estimation services.
"""
