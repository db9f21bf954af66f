"""
Test package for Daily Notes application.
"""
