"""Growth of algebras built from uniformly recurrent words.

Modules: ``words`` (sources and factor languages), ``regularize`` (growth
series calculus), ``monomial`` (A_w), ``liecomm`` (its commutator Lie
algebra), ``groupoid`` (the groupoid convolution algebra), ``qdim``
(q-dimensions), ``pipeline`` and ``cli``.
"""

from .linalg import QQ, Field
from .monomial import MonomialAlgebra
from .regularize import GrowthSeries
from .words import FactorLanguage, WordSource, factor_language, word_from_spec

__version__ = "0.1.0"

__all__ = [
    "QQ", "Field", "MonomialAlgebra", "GrowthSeries", "FactorLanguage",
    "WordSource", "factor_language", "word_from_spec",
]
