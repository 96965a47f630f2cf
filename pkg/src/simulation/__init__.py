"""Monte Carlo cross-checks"""
