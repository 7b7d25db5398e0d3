"""Spectral analysis and evolutionary search for negabent Boolean functions."""
from .boolfunc import (
    GaussianInt,
    NegaSpectrum,
    TruthTable,
    WalshSpectrum,
    anf_degree,
    covering_bound,
    extend_odd,
    is_bent,
    is_bent_negabent,
    is_negabent_direct,
    is_negabent_reduced,
    max_abs_count,
    nega_transform,
    nonlinearity,
    sigma1,
    sigma2,
    wht,
    xor_tables,
)
from .fitness import fitness_even, fitness_odd, fitness_optimum

__version__ = "0.1.0"
