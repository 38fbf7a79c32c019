"""Filling census for dually positive star-shaped plumbings.

Modules: ``plumbing`` (graphs, Seifert data, boundary homology), ``dualgraph``
(the complementary sphere configuration), ``homology`` (representations in a
blown-up projective plane), ``census`` (filling candidates and family checks),
``monodromy`` (Dehn-twist words and equivalence proofs) and ``cli``.
"""

__version__ = "0.1.0"
