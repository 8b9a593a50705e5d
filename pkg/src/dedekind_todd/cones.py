"""Simplicial lattice cones and their chain complex.

A cone is an ordered tuple of primitive integer vectors. Generators are the
columns of the generator matrix ``M``, so a point with barycentric
coordinates ``a`` is ``M @ a``. Dual generators are stored as rows.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

__all__ = [
    "LatticeCone",
    "ConeChain",
    "SubdivisionNode",
    "integer_det",
    "rational_inverse",
    "hermite_diagonal",
    "standard_cone",
    "dual_cone",
    "parallelepiped_lattice_points",
    "parallelepiped_points_bruteforce",
    "boundary",
    "subdivide",
    "stellar_pieces",
    "subdivision_tree",
    "nonsingular_subdivision",
    "outer_inner_split",
    "cone_to_json",
    "cone_from_json",
]

Vector = Tuple[int, ...]


# small exact linear algebra ---------------------------------------------------

def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(rows: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Inverse over the rationals by Gauss-Jordan; ValueError if singular."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [r[n:] for r in a]


def _primitive(vec: Sequence[int]) -> Vector:
    g = math.gcd(*vec) if vec else 0
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in vec)


def hermite_diagonal(columns: Sequence[Sequence[int]]) -> List[int]:
    """Diagonal of a lower triangular column Hermite form of the lattice.

    The lattice is spanned by ``columns`` (length n vectors, n of them).
    The box ``prod [0, h_i)`` is then a full set of coset representatives
    of Z^n modulo the lattice.
    """
    n = len(columns)
    cols = [list(c) for c in columns]
    diag = []
    for row in range(n):
        active = list(range(row, n))
        # gcd-combine the remaining columns on this row into column ``row``
        while True:
            nz = [j for j in active if cols[j][row] != 0]
            if not nz:
                raise ValueError("columns are linearly dependent")
            j0 = min(nz, key=lambda j: abs(cols[j][row]))
            done = True
            for j in nz:
                if j == j0:
                    continue
                f = cols[j][row] // cols[j0][row]
                cols[j] = [x - f * y for x, y in zip(cols[j], cols[j0])]
                if cols[j][row] != 0:
                    done = False
            if done:
                break
        cols[row], cols[j0] = cols[j0], cols[row]
        diag.append(abs(cols[row][row]))
    return diag


# cones -----------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeCone:
    """Ordered tuple of primitive lattice vectors in Z^dim."""

    generators: Tuple[Vector, ...]
    dim: int
    _det: Optional[int] = field(default=None, compare=False, hash=False, repr=False)

    def __init__(self, generators: Iterable[Sequence[int]], dim: Optional[int] = None):
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        if dim is None:
            if not gens:
                raise ValueError("dimension required for the empty cone")
            dim = len(gens[0])
        for g in gens:
            if len(g) != dim:
                raise ValueError("generator length does not match the dimension")
            if math.gcd(*g) != 1:
                raise ValueError(f"generator {g} is not primitive")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "dim", dim)
        det = integer_det(self.matrix()) if len(gens) == dim else None
        object.__setattr__(self, "_det", det)

    @property
    def m(self) -> int:
        return len(self.generators)

    def matrix(self) -> List[List[int]]:
        """Generator matrix with the generators as columns."""
        return [[g[i] for g in self.generators] for i in range(self.dim)]

    @property
    def det(self) -> int:
        if self._det is None:
            raise ValueError("determinant needs a full-dimensional simplicial cone")
        return self._det

    @property
    def is_full(self) -> bool:
        return self.m == self.dim

    @property
    def is_degenerate(self) -> bool:
        return not self.is_full or self._det == 0

    @property
    def is_nonsingular(self) -> bool:
        return self.is_full and abs(self._det) == 1

    @property
    def orientation(self) -> int:
        d = self.det
        return (d > 0) - (d < 0)

    def face(self, i: int) -> "LatticeCone":
        """The cone with generator ``i`` (0-based) removed."""
        return LatticeCone(self.generators[:i] + self.generators[i + 1:], self.dim)

    def with_generator(self, v: Sequence[int]) -> "LatticeCone":
        return LatticeCone(self.generators + (tuple(v),), self.dim)

    def barycentric(self, point: Sequence[int]) -> List[Fraction]:
        """Coordinates ``a`` with ``point = sum a_i v_i``."""
        self._require_nondegenerate()
        inv = rational_inverse(self.matrix())
        return [sum(r[j] * point[j] for j in range(self.dim)) for r in inv]

    def _require_nondegenerate(self) -> None:
        if self.is_degenerate:
            raise ValueError("operation needs a nondegenerate full-dimensional cone")

    def __repr__(self) -> str:
        return f"Cone({', '.join(map(str, self.generators))})"


def standard_cone(q: int, p: Sequence[int]) -> LatticeCone:
    """Cone(e_1, ..., e_{n-1}, (p_1, ..., p_{n-1}, q))."""
    n = len(p) + 1
    if q < 1:
        raise ValueError("q must be positive")
    for pi in p:
        if math.gcd(pi, q) != 1:
            raise ValueError(f"gcd({pi}, {q}) != 1")
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n - 1)]
    gens.append(tuple(p) + (q,))
    return LatticeCone(gens, n)


def dual_cone(cone: LatticeCone) -> LatticeCone:
    """Cone of primitive inward facet normals, one row per generator.

    Row ``i`` pairs to zero with every generator except ``v_i`` and
    positively with ``v_i``.
    """
    cone._require_nondegenerate()
    inv = rational_inverse(cone.matrix())
    rows = []
    for r in inv:
        den = math.lcm(*(x.denominator for x in r))
        rows.append(_primitive([int(x * den) for x in r]))
    return LatticeCone(rows, cone.dim)


def _reduce_into_parallelepiped(inv: List[List[Fraction]], mat: List[List[int]],
                                z: Sequence[int]) -> Vector:
    n = len(z)
    a = [sum(r[j] * z[j] for j in range(n)) for r in inv]
    a = [x - math.floor(x) for x in a]
    out = []
    for i in range(n):
        v = sum(mat[i][j] * a[j] for j in range(n))
        out.append(int(v))
    return tuple(out)


def parallelepiped_lattice_points(cone: LatticeCone) -> List[Vector]:
    """Integer points of the half-open parallelepiped, sorted.

    One representative per coset of Z^n modulo the cone lattice, folded
    back into the parallelepiped. Exactly |det| points.
    """
    cone._require_nondegenerate()
    mat = cone.matrix()
    inv = rational_inverse(mat)
    diag = hermite_diagonal(cone.generators)
    pts = {_reduce_into_parallelepiped(inv, mat, z)
           for z in itertools.product(*(range(h) for h in diag))}
    out = sorted(pts)
    if len(out) != abs(cone.det):
        raise AssertionError("coset enumeration missed parallelepiped points")
    return out


def parallelepiped_points_bruteforce(cone: LatticeCone) -> List[Vector]:
    """Same set by scanning the bounding box; slow, kept as a cross-check."""
    cone._require_nondegenerate()
    inv = rational_inverse(cone.matrix())
    lo = [sum(min(0, g[i]) for g in cone.generators) for i in range(cone.dim)]
    hi = [sum(max(0, g[i]) for g in cone.generators) for i in range(cone.dim)]
    out = []
    for z in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        a = [sum(r[j] * z[j] for j in range(cone.dim)) for r in inv]
        if all(0 <= x < 1 for x in a):
            out.append(tuple(z))
    return sorted(out)


# chains ----------------------------------------------------------------------

class ConeChain:
    """Finite integer combination of ordered cones. Zero terms are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[LatticeCone, int]] = None):
        self.terms: Dict[LatticeCone, int] = {}
        if terms:
            for c, k in terms.items():
                self._add(c, k)

    def _add(self, cone: LatticeCone, k: int) -> None:
        v = self.terms.get(cone, 0) + k
        if v:
            self.terms[cone] = v
        else:
            self.terms.pop(cone, None)

    @classmethod
    def of(cls, cone: LatticeCone, coeff: int = 1) -> "ConeChain":
        return cls({cone: coeff})

    def __add__(self, other: "ConeChain") -> "ConeChain":
        out = ConeChain(self.terms)
        for c, k in other.terms.items():
            out._add(c, k)
        return out

    def __neg__(self) -> "ConeChain":
        return ConeChain({c: -k for c, k in self.terms.items()})

    def __sub__(self, other: "ConeChain") -> "ConeChain":
        return self + (-other)

    def __rmul__(self, k: int) -> "ConeChain":
        return ConeChain({c: k * v for c, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConeChain):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[LatticeCone, int]]:
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].generators))

    def canonical(self) -> "ConeChain":
        """Sort each cone's generators, absorbing the permutation sign.

        Cones with a repeated generator are dropped; they vanish in any
        alternating functional.
        """
        out = ConeChain()
        for c, k in self.terms.items():
            gens = list(c.generators)
            if len(set(gens)) < len(gens):
                continue
            order = sorted(range(len(gens)), key=lambda i: gens[i])
            out._add(LatticeCone([gens[i] for i in order], c.dim), k * _perm_sign(order))
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "ConeChain(0)"
        return "ConeChain(" + " ".join(f"{k:+d}*{c!r}" for c, k in self) + ")"


def _perm_sign(order: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def boundary(chain: ConeChain | LatticeCone) -> ConeChain:
    """Alternating face sum: the face dropping generator i gets sign (-1)^i (0-based)."""
    if isinstance(chain, LatticeCone):
        chain = ConeChain.of(chain)
    out = ConeChain()
    for cone, k in chain.terms.items():
        for i in range(cone.m):
            out._add(cone.face(i), k * (-1) ** i)
    return out


def subdivide(cone: LatticeCone, v: Sequence[int]) -> ConeChain:
    """Chain-level stellar subdivision of an m-cone by the ray ``v``.

    Returns ``C - (-1)^m * boundary((C, v))``. Up to reordering generators
    this is the sum of the cones obtained by putting ``v`` in place of each
    generator in turn.
    """
    v = tuple(int(x) for x in v)
    if math.gcd(*v) != 1:
        raise ValueError(f"{v} is not primitive")
    ext = cone.with_generator(v)
    return ConeChain.of(cone) - (-1) ** cone.m * boundary(ext)


# nonsingular decomposition ---------------------------------------------------

def _best_interior_point(cone: LatticeCone) -> Tuple[Vector, List[Fraction]]:
    inv = rational_inverse(cone.matrix())
    best = None
    for w in parallelepiped_lattice_points(cone):
        if not any(w):
            continue
        a = [sum(r[j] * w[j] for j in range(cone.dim)) for r in inv]
        key = (sum(a), w)
        if best is None or key < best[0]:
            best = (key, w, a)
    assert best is not None
    return best[1], best[2]


def stellar_pieces(cone: LatticeCone, v: Sequence[int],
                   coords: Optional[Sequence[Fraction]] = None) -> List[LatticeCone]:
    """Set-theoretic split of ``cone`` by an interior-or-face ray ``v``.

    Generator i is swapped for ``v`` whenever its barycentric coordinate is
    positive. Each piece keeps the orientation of ``cone``.
    """
    if coords is None:
        coords = cone.barycentric(v)
    if any(a < 0 for a in coords):
        raise ValueError("ray lies outside the cone")
    gens = cone.generators
    return [LatticeCone(gens[:i] + (tuple(v),) + gens[i + 1:], cone.dim)
            for i, a in enumerate(coords) if a > 0]


@dataclass
class SubdivisionNode:
    """One cone in the recursive subdivision; leaves are nonsingular."""

    cone: LatticeCone
    ray: Optional[Vector] = None
    children: List["SubdivisionNode"] = field(default_factory=list)

    def leaves(self) -> List[LatticeCone]:
        if not self.children:
            return [self.cone]
        out: List[LatticeCone] = []
        for c in self.children:
            out.extend(c.leaves())
        return out


def subdivision_tree(cone: LatticeCone) -> SubdivisionNode:
    """Recursive subdivision until every cone has |det| = 1.

    The ray used at each step is the nonzero parallelepiped point with the
    smallest barycentric sum (ties: lexicographically smallest). Such a
    point is automatically primitive and every piece has a strictly smaller
    determinant.
    """
    cone._require_nondegenerate()
    node = SubdivisionNode(cone)
    if abs(cone.det) == 1:
        return node
    v, a = _best_interior_point(cone)
    node.ray = v
    node.children = [subdivision_tree(piece) for piece in stellar_pieces(cone, v, a)]
    return node


def nonsingular_subdivision(cone: LatticeCone) -> List[Tuple[int, LatticeCone]]:
    """Signed list of unimodular cones. Signs are all +1 for this procedure."""
    return [(1, leaf) for leaf in subdivision_tree(cone).leaves()]


def outer_inner_split(cone: LatticeCone,
                      pieces: Sequence[Tuple[int, LatticeCone] | LatticeCone]
                      ) -> Tuple[List[LatticeCone], List[LatticeCone]]:
    """Separate the pieces that contain a whole facet of ``cone``.

    ``outer[j]`` contains every generator of ``cone`` except ``v_j`` and is
    reordered so that its new ray sits at position j. All other pieces are
    inner. Raises if some facet is covered by zero or several pieces.
    """
    cones = [p[1] if isinstance(p, tuple) else p for p in pieces]
    gens = cone.generators
    outer: List[LatticeCone] = []
    used = set()
    for j in range(cone.m):
        facet = set(gens[:j] + gens[j + 1:])
        hits = [i for i, d in enumerate(cones) if facet <= set(d.generators)]
        if len(hits) != 1:
            raise ValueError(f"facet {j} lies in {len(hits)} pieces")
        d = cones[hits[0]]
        extra = [g for g in d.generators if g not in facet]
        if len(extra) != 1:
            raise ValueError("outer piece does not have exactly one new ray")
        new = list(gens)
        new[j] = extra[0]
        outer.append(LatticeCone(new, cone.dim))
        used.add(hits[0])
    inner = [d for i, d in enumerate(cones) if i not in used]
    return outer, inner


# serialization ---------------------------------------------------------------

def cone_to_json(cone: LatticeCone) -> str:
    return json.dumps({"generators": [list(g) for g in cone.generators]})


def cone_from_json(text: str | Mapping) -> LatticeCone:
    data = json.loads(text) if isinstance(text, str) else text
    gens = data["generators"]
    if not gens:
        raise ValueError("cone JSON has no generators")
    return LatticeCone(gens)
