# Max-plus algebra engine: semiring arithmetic, digraph structure, spectral analysis,
# transients, bound formulas and walk surgery.
