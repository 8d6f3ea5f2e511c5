"""Twisted vertex and edge adjacency matrices and their spectra.

A 1-form ``omega`` gives each oriented edge ``a`` the unit gain ``e(omega(a))``.
``A_omega`` sums gains of edges ``v -> w``; ``W_omega[a, b] = e(omega(b))``
whenever ``a`` feeds into ``b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.optimize import linear_sum_assignment

from .errors import BudgetExceeded, EigenSolverFailure, NotRegular
from .graph import (
    Graph,
    SpanningTree,
    edge_adjacency,
    spanning_tree,
    tree_bipartition,
    two_core,
)
from .homology import Character, HomologyData, OneForm, character_of, e, form_of, homology_data

SPEC_TOL = 1e-8
CLUSTER_RADIUS = 1e-4


def _form(G: Graph, omega, H: HomologyData | None = None) -> OneForm:
    if omega is None:
        return OneForm.zero(G.m)
    if isinstance(omega, Character):
        return form_of(H or homology_data(G), omega)
    if isinstance(omega, OneForm):
        return omega
    return OneForm(np.asarray(omega, dtype=float))


def twisted_adjacency(G: Graph, omega=None, H: HomologyData | None = None) -> np.ndarray:
    gains = e(_form(G, omega, H).on_oriented())
    A = np.zeros((G.n, G.n), dtype=complex)
    for a in range(2 * G.m):
        A[G.tail(a), G.head(a)] += gains[a]
    return A


def twisted_edge_adjacency(G: Graph, omega=None, H: HomologyData | None = None) -> np.ndarray:
    return edge_adjacency(G) * e(_form(G, omega, H).on_oriented())[None, :]


def gain_diagonal(G: Graph, omega=None, H: HomologyData | None = None) -> np.ndarray:
    """B_omega: diagonal of e(omega(a) / 2) over oriented edges."""
    return np.diag(e(_form(G, omega, H).on_oriented() / 2))


def degree_matrix_minus_one(G: Graph) -> np.ndarray:
    return np.diag(G.degrees - 1).astype(float)


@dataclass(frozen=True)
class TwistedMatrices:
    A: np.ndarray
    W: np.ndarray
    W_prime: np.ndarray
    W_second: np.ndarray
    B: np.ndarray
    Q: np.ndarray


def twisted_matrices(G: Graph, omega=None, H: HomologyData | None = None) -> TwistedMatrices:
    """All twisted matrices for one 1-form, with the variants

    ``W' = B_{2w} W1`` and ``W'' = B_w W1 B_w`` (both similar to ``W``).
    """
    omega = _form(G, omega, H)
    W1 = edge_adjacency(G)
    B = gain_diagonal(G, omega)
    B2 = gain_diagonal(G, 2 * omega)
    return TwistedMatrices(
        A=twisted_adjacency(G, omega),
        W=twisted_edge_adjacency(G, omega),
        W_prime=B2 @ W1,
        W_second=B @ W1 @ B,
        B=B,
        Q=degree_matrix_minus_one(G),
    )


# spectra ----------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray = field(repr=False)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=complex).ravel()
        order = np.lexsort((ev.imag.round(10), ev.real.round(10)))
        ev = ev[order]
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues), initial=0.0))

    def __neg__(self) -> "Spectrum":
        return Spectrum(-self.eigenvalues)

    def conj(self) -> "Spectrum":
        return Spectrum(self.eigenvalues.conj())

    def power_sum(self, l: int) -> complex:
        return complex(np.sum(self.eigenvalues**l))

    def clustered(self, radius: float) -> "Spectrum":
        """Replace each cluster of eigenvalues (single linkage at ``radius``) by its mean.

        A defective eigenvalue of multiplicity k comes back from the solver as k
        values spread by about eps^(1/k); their mean is accurate to O(eps).
        """
        ev = self.eigenvalues
        if len(ev) < 2 or radius <= 0:
            return self
        pts = np.column_stack([ev.real, ev.imag])
        labels = fcluster(linkage(pts, method="single"), t=radius, criterion="distance")
        out = ev.copy()
        for lab in np.unique(labels):
            idx = labels == lab
            out[idx] = ev[idx].mean()
        return Spectrum(out)

    def distance(self, other: "Spectrum", cluster_radius: float = 0.0) -> float:
        """Largest pairwise gap under the optimal matching of the two multisets.

        With ``cluster_radius > 0`` both sides are first replaced by their
        cluster centroids.
        """
        if len(self) != len(other):
            return float("inf")
        if not len(self):
            return 0.0
        a, b = self, other
        if cluster_radius > 0:
            a, b = self.clustered(cluster_radius), other.clustered(cluster_radius)
        cost = np.abs(a.eigenvalues[:, None] - b.eigenvalues[None, :])
        rows, cols = linear_sum_assignment(cost)
        return float(cost[rows, cols].max())

    def robust_distance(self, other: "Spectrum") -> float:
        """min of the raw distance and the cluster-centroid distance."""
        scale = max(1.0, self.radius, other.radius)
        return min(self.distance(other), self.distance(other, CLUSTER_RADIUS * scale))

    def matches(self, other: "Spectrum", tol: float | None = None) -> bool:
        if tol is None:
            tol = SPEC_TOL * max(1.0, self.radius, other.radius)
        return self.robust_distance(other) <= tol

    def to_json(self) -> list[list[float]]:
        return [[float(z.real), float(z.imag)] for z in self.eigenvalues]


def _is_hermitian(M: np.ndarray) -> bool:
    return np.allclose(M, M.conj().T, atol=1e-13, rtol=0)


def spectrum(M: np.ndarray, hermitian: bool | None = None) -> Spectrum:
    M = np.asarray(M)
    if M.size == 0:
        return Spectrum(np.zeros(0))
    if not np.all(np.isfinite(M)):
        raise EigenSolverFailure("matrix has non-finite entries")
    if hermitian is None:
        hermitian = _is_hermitian(M)
    try:
        ev = np.linalg.eigvalsh(M) if hermitian else np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverFailure(str(exc)) from exc
    return Spectrum(ev)


def adjacency_spectrum(G: Graph, omega=None, H: HomologyData | None = None) -> Spectrum:
    return spectrum(twisted_adjacency(G, omega, H), hermitian=True)


def edge_spectrum(G: Graph, omega=None, H: HomologyData | None = None) -> Spectrum:
    """Spectrum of ``W_omega``.

    Pendant trees only contribute nilpotent blocks, so the eigensolver runs on
    the 2-core and the exact zeros are appended. This keeps the computed zeros
    exact instead of scattering them on a circle of radius eps^(1/k).
    """
    omega = _form(G, omega, H)
    if G.genus < 1:
        return Spectrum(np.zeros(2 * G.m))
    core, edge_map, _ = two_core(G)
    sub = OneForm(omega.coeffs[list(edge_map)])
    ev = spectrum(twisted_edge_adjacency(core, sub), hermitian=False).eigenvalues
    return Spectrum(np.concatenate([ev, np.zeros(2 * (G.m - core.m))]))


def spectral_radius(G: Graph, omega=None, H: HomologyData | None = None) -> float:
    return edge_spectrum(G, omega, H).radius


# canonical characters ----------------------------------------------------------

def canonical_form_orientation(G: Graph) -> OneForm:
    """1/2 on every positively oriented edge."""
    return OneForm(np.full(G.m, 0.5))


def canonical_form_tree(G: Graph, T: SpanningTree | None = None) -> OneForm:
    """1/2 on non-tree edges that are loops or join two vertices of the same tree class."""
    T = T or spanning_tree(G)
    v1, _ = tree_bipartition(G, T)
    c = np.zeros(G.m)
    for i in T.non_tree_edges:
        t, h = G.edges[i]
        crosses = t != h and ((t in v1) != (h in v1))
        c[i] = 0.0 if crosses else 0.5
    return OneForm(c)


def canonical_character(G: Graph, H: HomologyData | None = None) -> Character:
    H = H or homology_data(G)
    return character_of(H, canonical_form_tree(G, H.tree))


def dual_character(G: Graph, chi: Character, H: HomologyData | None = None) -> Character:
    return canonical_character(G, H) - chi


def dual_form(G: Graph, omega: OneForm, H: HomologyData | None = None) -> OneForm:
    """A 1-form whose character is theta minus that of ``omega``."""
    H = H or homology_data(G)
    return canonical_form_tree(G, H.tree) - omega


# verification ------------------------------------------------------------------

@dataclass
class AntisymmetryReport:
    passed: bool
    adjacency_distance: float
    edge_distance: float
    conjugation_distance: float
    tol: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_antisymmetry(G: Graph, omega=None, tol: float = 1e-7, H: HomologyData | None = None) -> AntisymmetryReport:
    """Compare spec A_{w'} with -spec A_w and spec W_{w'} with -spec W_w for w' dual to w.

    Also checks that spec W_w is closed under complex conjugation.
    """
    H = H or homology_data(G)
    omega = _form(G, omega, H)
    other = dual_form(G, omega, H)
    sa, sa2 = adjacency_spectrum(G, omega), adjacency_spectrum(G, other)
    sw, sw2 = edge_spectrum(G, omega), edge_spectrum(G, other)
    da = sa2.robust_distance(-sa)
    dw = sw2.robust_distance(-sw)
    dc = sw.robust_distance(sw.conj())
    scale = max(1.0, sw.radius, sa.radius)
    return AntisymmetryReport(max(da, dw, dc) <= tol * scale, da, dw, dc, tol * scale)


@dataclass
class SweepTable:
    coords: np.ndarray
    """(points, g) grid coordinates."""
    rho_A: np.ndarray
    rho_W: np.ndarray
    argmax: list[int]
    """Indices of the points attaining max rho_W (within tolerance)."""

    def to_csv(self) -> str:
        g = self.coords.shape[1]
        head = ",".join([f"coord_{i + 1}" for i in range(g)] + ["rho_A", "rho_W"])
        lines = [head]
        for c, a, w in zip(self.coords, self.rho_A, self.rho_W):
            lines.append(",".join([_fmt(x) for x in c] + [_fmt(a), _fmt(w)]))
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def torus_grid(g: int, grid_n: int) -> np.ndarray:
    pts = itertools.product(range(grid_n), repeat=g)
    return np.array(list(pts), dtype=float).reshape(-1, g) / grid_n


def radius_sweep(
    G: Graph, grid_n: int, budget: int = 10**6, tol: float = 1e-7, H: HomologyData | None = None
) -> SweepTable:
    """rho(A_w) and rho(W_w) on the uniform grid of the character torus."""
    H = H or homology_data(G)
    if H.g < 1:
        raise ValueError("the character torus of a tree is a point")
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    if grid_n**H.g > budget:
        raise BudgetExceeded(f"{grid_n}^{H.g} grid points exceed the budget of {budget}")
    coords = torus_grid(H.g, grid_n)
    rho_a = np.empty(len(coords))
    rho_w = np.empty(len(coords))
    for k, c in enumerate(coords):
        omega = form_of(H, Character(tuple(c)))
        rho_a[k] = adjacency_spectrum(G, omega).radius
        rho_w[k] = edge_spectrum(G, omega).radius
    top = rho_w.max()
    argmax = [int(k) for k in np.flatnonzero(rho_w >= top - tol * max(1.0, top))]
    return SweepTable(coords, rho_a, rho_w, argmax)


def regular_degree(G: Graph) -> int:
    deg = set(G.degrees.tolist())
    if len(deg) != 1:
        raise NotRegular(f"vertex degrees {sorted(deg)} are not all equal")
    return deg.pop()


def regular_spec_map(q: int, spec_A: Spectrum | Iterable[float], g: int) -> Spectrum:
    """Spectrum of W for a (q+1)-regular graph from the spectrum of A.

    Each adjacency eigenvalue ``lam`` contributes the two roots of
    ``k^2 - lam k + q = 0``; then ``g - 1`` copies each of +1 and -1.
    """
    lams = spec_A.eigenvalues if isinstance(spec_A, Spectrum) else np.asarray(list(spec_A))
    out: list[complex] = []
    for lam in np.real_if_close(lams):
        lam = complex(lam)
        disc = np.sqrt(lam * lam - 4 * q + 0j)
        out += [(lam + disc) / 2, (lam - disc) / 2]
    if g >= 1:
        out += [1.0] * (g - 1) + [-1.0] * (g - 1)
    else:
        # a tree: (1 - u^2)^(g-1) divides out one factor each of 1 - u and 1 + u
        for z in (1.0, -1.0):
            k = int(np.argmin([abs(x - z) for x in out]))
            out.pop(k)
    return Spectrum(np.array(out))
