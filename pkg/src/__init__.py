"""
SNS-PM-QKD key-rate toolkit - Source Package
"""

__version__ = "0.1.0"
