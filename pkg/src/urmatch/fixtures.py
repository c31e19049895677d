"""Small named graphs used throughout the tests and docs.

* ``C4``  - 4-cycle; its perfect matchings are not uniquely restricted.
* ``P4``  - path x1-y1-x2-y2; unique perfect matching.
* ``K12`` - one X vertex joined to two Y vertices.
* ``C4P`` - C4 plus a pendant x3 on y1; some maximum matchings are UR, some not.
"""

from __future__ import annotations

from .graph import BipartiteGraph, disjoint_union
from .matching import Matching

C4 = BipartiteGraph(2, 2, ((0, 0), (0, 1), (1, 0), (1, 1)))
MC4 = Matching(((0, 0), (1, 1)))

P4 = BipartiteGraph(2, 2, ((0, 0), (1, 0), (1, 1)))
MP4 = Matching(((0, 0), (1, 1)))

K12 = BipartiteGraph(1, 2, ((0, 0), (0, 1)))
MK12 = Matching(((0, 0),))

C4P = BipartiteGraph(3, 2, ((0, 0), (0, 1), (1, 0), (1, 1), (2, 0)))
MG_C4P = Matching(((2, 0), (1, 1)))

EMPTY = BipartiteGraph(0, 0, ())
SINGLE_EDGE = BipartiteGraph(1, 1, ((0, 0),))

TWO_C4 = disjoint_union([C4, C4])
MTWO_C4 = Matching(((0, 0), (1, 1), (2, 2), (3, 3)))

ALL = {"C4": C4, "P4": P4, "K12": K12, "C4P": C4P}
