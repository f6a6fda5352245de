"""This package computes exponential periods of genus-zero exp-algebraic curves and recovers the curve's singularity type from them"""
