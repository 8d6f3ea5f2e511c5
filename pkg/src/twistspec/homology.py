"""Chains, Hodge decomposition, homology bases, characters and finite quotients.

Coordinates of homology classes are taken in the fundamental-cycle basis
``u_i = e_i + (tree path from e_i(1) back to e_i(0))`` built from the non-tree
edges of the BFS spanning tree. Characters are stored by their values
``omega(u_i) mod 1``, i.e. in the dual basis of harmonic forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

import numpy as np

from .errors import LinearSolveFailure, NotClosed, SingularLattice
from .graph import Graph, SpanningTree, spanning_tree
from .smith import det_bareiss, kernel_lattice, matmul, smith_normal_form

CHAR_TOL = 1e-9


def e(x):
    """exp(2 pi i x)."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


# chains and forms -------------------------------------------------------------

def boundary_matrix(G: Graph) -> np.ndarray:
    """n x m; column i is head(e_i) - tail(e_i)."""
    B = np.zeros((G.n, G.m), dtype=int)
    for i, (t, h) in enumerate(G.edges):
        B[h, i] += 1
        B[t, i] -= 1
    return B


def differential_matrix(G: Graph) -> np.ndarray:
    """m x n; (df)(e_i) = f(head) - f(tail)."""
    return boundary_matrix(G).T.copy()


def laplacian(G: Graph) -> np.ndarray:
    B = boundary_matrix(G)
    return B @ B.T


@dataclass(frozen=True)
class OneForm:
    """Real 1-form; ``coeffs[i]`` is its value on positively oriented edge i."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).copy()
        if not np.all(np.isfinite(c)):
            raise ValueError("1-form coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, m: int) -> "OneForm":
        return cls(np.zeros(m))

    def on_oriented(self) -> np.ndarray:
        """Values on all 2m oriented edges (inverse edges get the negative)."""
        return np.concatenate([self.coeffs, -self.coeffs])

    def __call__(self, chain) -> float:
        return float(np.dot(self.coeffs, chain))

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.coeffs + other.coeffs)

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.coeffs - other.coeffs)

    def __neg__(self) -> "OneForm":
        return OneForm(-self.coeffs)

    def __mul__(self, s: float) -> "OneForm":
        return OneForm(s * self.coeffs)

    __rmul__ = __mul__


def hodge_decompose(G: Graph, omega: OneForm) -> tuple[OneForm, OneForm]:
    """Split ``omega`` into (harmonic, exact) parts.

    The exact part is ``df`` with ``Lf = d*omega`` and ``f(0) = 0``.
    """
    B = boundary_matrix(G).astype(float)
    rhs = B @ omega.coeffs
    f = np.zeros(G.n)
    if G.n > 1:
        L = (B @ B.T)[1:, 1:]
        try:
            f[1:] = np.linalg.solve(L, rhs[1:])
        except np.linalg.LinAlgError as exc:
            raise LinearSolveFailure(str(exc)) from exc
    exact = B.T @ f
    return OneForm(omega.coeffs - exact), OneForm(exact)


def is_harmonic(G: Graph, omega: OneForm, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(boundary_matrix(G) @ omega.coeffs), initial=0.0) <= tol)


# homology ---------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyData:
    graph: Graph
    tree: SpanningTree
    basis: np.ndarray
    """g x m integer matrix; row i is the fundamental cycle u_i."""
    dual_basis: np.ndarray
    """g x m real matrix; row i is the harmonic part of de_i."""
    abel_matrix: np.ndarray
    """g x m integer matrix taking a cycle to its coordinates in the u basis."""

    @property
    def g(self) -> int:
        return len(self.tree.non_tree_edges)


def chain_of_walk(G: Graph, walk: Sequence[int]) -> np.ndarray:
    """Abelianization of a walk as an integer vector over positive edges."""
    c = np.zeros(G.m, dtype=int)
    for a in walk:
        if a < G.m:
            c[a] += 1
        else:
            c[a - G.m] -= 1
    return c


def homology_data(G: Graph, T: SpanningTree | None = None) -> HomologyData:
    T = T or spanning_tree(G)
    g = len(T.non_tree_edges)
    basis = np.zeros((g, G.m), dtype=int)
    dual = np.zeros((g, G.m))
    abel = np.zeros((g, G.m), dtype=int)
    for i, edge in enumerate(T.non_tree_edges):
        t, h = G.edges[edge]
        basis[i] = chain_of_walk(G, [edge] + T.path(h, t))
        de = np.zeros(G.m)
        de[edge] = 1.0
        dual[i] = hodge_decompose(G, OneForm(de))[0].coeffs
        abel[i, edge] = 1
    for X in (basis, dual, abel):
        X.setflags(write=False)
    return HomologyData(G, T, basis, dual, abel)


def abelianize(H: HomologyData, walk: Sequence[int], closed: bool = True) -> np.ndarray:
    """Coordinates of a closed walk's homology class in the u basis.

    With ``closed=False`` the raw chain is projected anyway, for diagnostics.
    """
    G = H.graph
    chain = chain_of_walk(G, walk)
    if closed:
        if len(walk) and G.head(walk[-1]) != G.tail(walk[0]):
            raise NotClosed("walk does not return to its start")
        if np.any(boundary_matrix(G) @ chain):
            raise NotClosed("walk is not a closed walk")
    return H.abel_matrix @ chain


# characters -------------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """Point of the character torus, coordinates in [0, 1)^g."""

    coords: tuple[float, ...]

    def __post_init__(self):
        c = tuple(_wrap(float(x)) for x in self.coords)
        object.__setattr__(self, "coords", c)

    @property
    def g(self) -> int:
        return len(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Character) or other.g != self.g:
            return NotImplemented
        return all(_circ_dist(a, b) <= CHAR_TOL for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash(tuple(round(x, 6) % 1.0 for x in self.coords))

    def __add__(self, other: "Character") -> "Character":
        return Character(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Character") -> "Character":
        return Character(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Character":
        return Character(tuple(-a for a in self.coords))

    def scaled(self, k: int) -> "Character":
        return Character(tuple(k * a for a in self.coords))

    def is_trivial(self) -> bool:
        return self == Character((0.0,) * self.g)


def _wrap(x: float) -> float:
    r = x % 1.0
    # snap values a hair below 1 back to 0 so that e.g. -1e-17 wraps to 0
    return 0.0 if r > 1.0 - 1e-12 else r


def _circ_dist(a: float, b: float) -> float:
    d = (a - b) % 1.0
    return min(d, 1.0 - d)


def character_of(H: HomologyData, omega: OneForm) -> Character:
    return Character(tuple(H.basis.astype(float) @ omega.coeffs))


def form_of(H: HomologyData, chi: Character) -> OneForm:
    """Representative supported on the non-tree edges."""
    c = np.zeros(H.graph.m)
    for x, edge in zip(chi.coords, H.tree.non_tree_edges):
        c[edge] = x
    return OneForm(c)


def harmonic_form_of(H: HomologyData, chi: Character) -> OneForm:
    return OneForm(np.asarray(chi.coords) @ H.dual_basis if H.g else np.zeros(H.graph.m))


def char_value(H: HomologyData, chi: Character | OneForm, alpha) -> complex:
    """chi(alpha) for alpha in Z^g (u coordinates) or a 1-chain over the m edges.

    A length-g vector is read as coordinates. The two readings only collide when
    m == g (a bouquet of loops), where they coincide.
    """
    alpha = np.asarray(alpha)
    if isinstance(chi, OneForm):
        if alpha.shape == (H.g,):
            return complex(e(np.dot(H.basis.T @ alpha, chi.coeffs)))
        return complex(e(chi(alpha)))
    if alpha.shape == (H.g,):
        return complex(e(np.dot(chi.coords, alpha)))
    if alpha.shape == (H.graph.m,):
        return complex(e(np.dot(chi.coords, H.abel_matrix @ alpha)))
    raise ValueError(f"alpha must have length g={H.g} or m={H.graph.m}")


# finite quotients -------------------------------------------------------------

@dataclass(frozen=True)
class QuotientGroup:
    """Q = Z^g / Lambda, Lambda spanned by the columns of ``lattice_gens``."""

    lattice_gens: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    invariants: tuple[int, ...]

    @property
    def g(self) -> int:
        return len(self.invariants)

    @property
    def order(self) -> int:
        return prod(self.invariants)

    @property
    def elements(self) -> list[tuple[int, ...]]:
        """Canonical representatives in SNF coordinates, lexicographic order."""
        return [tuple(x) for x in itertools.product(*(range(d) for d in self.invariants))]

    def class_of(self, alpha: Sequence[int]) -> tuple[int, ...]:
        """SNF coordinates of the class of ``alpha`` (u coordinates)."""
        a = [sum(int(u) * int(x) for u, x in zip(row, alpha)) for row in self.U]
        return tuple(ai % d for ai, d in zip(a, self.invariants))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariants))

    def scale(self, k: int, a: Sequence[int]) -> tuple[int, ...]:
        return tuple((k * x) % d for x, d in zip(a, self.invariants))

    def pairing(self, k: Sequence[int], a: Sequence[int]) -> complex:
        """Bicharacter e(sum k_i a_i / d_i)."""
        return complex(e(sum(Fraction(ki * ai, d) for ki, ai, d in zip(k, a, self.invariants)) % 1))

    def dual_character(self, k: Sequence[int]) -> Character:
        """The character of Z^g that factors through Q as ``a -> pairing(k, a)``."""
        coords = []
        for j in range(self.g):
            s = sum(Fraction(ki * self.U[i][j], d) for i, (ki, d) in enumerate(zip(k, self.invariants)))
            coords.append(float(s % 1))
        return Character(tuple(coords))

    @property
    def dual_chars(self) -> list[Character]:
        return [self.dual_character(k) for k in self.elements]

    def divide(self, a: Sequence[int], k: int) -> list[tuple[int, ...]]:
        """All b in Q with k * b = a."""
        choices = [[b for b in range(d) if (k * b - ai) % d == 0] for ai, d in zip(a, self.invariants)]
        return [tuple(x) for x in itertools.product(*choices)]


def quotient_group(H: HomologyData | int, lattice_gens) -> QuotientGroup:
    g = H.g if isinstance(H, HomologyData) else int(H)
    M = [[int(x) for x in row] for row in lattice_gens]
    if len(M) != g or any(len(r) != g for r in M):
        raise SingularLattice(f"lattice generators must be a {g}x{g} integer matrix")
    if det_bareiss(M) == 0:
        raise SingularLattice("lattice generators are linearly dependent")
    U, d, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == [[d[i] if i == j else 0 for j in range(g)] for i in range(g)]
    return QuotientGroup(
        tuple(tuple(r) for r in M), tuple(tuple(r) for r in U), tuple(tuple(r) for r in V), tuple(d)
    )


def character_kernel(chi: Character, order: int) -> list[list[int]]:
    """Generators of ker(chi) in Z^g for a character of exact order dividing ``order``."""
    coeffs = []
    for x in chi.coords:
        k = x * order
        r = round(k)
        if abs(k - r) > 1e-7:
            raise ValueError(f"character coordinate {x} is not a multiple of 1/{order}")
        coeffs.append(int(r))
    return kernel_lattice(coeffs, order)


def orthogonality_check(Q: QuotientGroup, tol: float = 1e-10) -> tuple[bool, tuple | None]:
    """Check (1/|Q|) sum_w chi_w(a) conj(chi_w(b)) = delta_ab for all pairs.

    Returns ``(ok, offending_pair)``.
    """
    elems = Q.elements
    d = np.array(Q.invariants, dtype=float)
    E = np.array(elems, dtype=float).reshape(len(elems), Q.g)
    # table[w, a] = pairing(w, a)
    table = e((E / d) @ E.T) if Q.g else np.ones((1, 1), dtype=complex)
    gram = table.T @ table.conj() / Q.order
    dev = np.abs(gram - np.eye(len(elems)))
    if dev.max(initial=0.0) <= tol:
        return True, None
    i, j = np.unravel_index(np.argmax(dev), dev.shape)
    return False, (elems[i], elems[j])


def complexity(G: Graph) -> int:
    """Number of spanning trees (matrix-tree theorem, exact)."""
    L = laplacian(G)
    return det_bareiss(L[1:, 1:].tolist()) if G.n > 1 else 1


def torus_volume(G: Graph, Q: QuotientGroup | None = None) -> float:
    vol = 1.0 / np.sqrt(complexity(G))
    return vol / Q.order if Q is not None else vol
