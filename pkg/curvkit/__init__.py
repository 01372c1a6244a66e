"""
curvkit - scalar curvature estimation from finite metric spaces
"""

__version__ = "1.0.0"
