"""Rate formulas, attack analysis, sweeps and named presets"""
