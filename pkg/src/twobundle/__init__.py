"""Finite bicategories, their Duskin nerves, and bundles over ordered simplicial complexes.

Modules: ``twocat`` (tables and coherence), ``simplicial`` (finite simplicial
sets, horns, complexes), ``nerve``, ``bundle`` (bundles, gluing,
concordance), ``examples`` (chain-complex and Kapranov-Voevodsky
instances), ``io`` and ``cli``.
"""

__version__ = "0.1.0"
