"""compactlab: similarity analysis, closed forms, simulation and frames for compacton equations."""
