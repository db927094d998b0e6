"""Computing with bonded knots, links, and braids.

Subpackage map:

- ``polyring``  -- exact integer Laurent polynomials in A with ordinary
  exponents in the formal coefficients a and b.
- ``diagram``   -- the bonded-diagram data model (planar rotation system),
  validation, faces, serialization, and example generators.
- ``moves``     -- the move engine (find/apply/random walks) and the
  standardize/tighten sweeps.
- ``bracket``   -- Kauffman bracket and the bonded bracket state sum.
- ``unplug``    -- unplugging invariants (full / bonded / strict).
- ``tangle``    -- tangle-insertion invariants for rigid bonded links.
- ``braidalg``  -- bonded braid words: parsing, relations, closure,
  projections, L-moves, and bounded equivalence search.
- ``braiding``  -- Morse slice sequences and the braiding algorithm.
- ``cli``       -- the ``bondforge`` command-line front end.
"""

__version__ = "0.1.0"
