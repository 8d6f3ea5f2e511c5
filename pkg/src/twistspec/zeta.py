"""Reciprocal L-functions as polynomials, their log series, and transform checks.

``1/L(u, chi_w)`` is computed two ways:

* edge route: ``det(I - u W_w) = prod (1 - lam u)`` over the spectrum of ``W_w``;
* vertex route: ``(1 - u^2)^(g-1) det(I - A_w u + Q u^2)``, with the determinant
  sampled at roots of unity and interpolated by an inverse FFT.

The two routes share no linear algebra beyond building the matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, RoundingFailure
from .graph import Graph
from .homology import (
    HomologyData,
    OneForm,
    QuotientGroup,
    character_of,
    form_of,
    homology_data,
)
from .twist import _form, degree_matrix_minus_one, edge_spectrum, twisted_adjacency

ROUND_GUARD = 1e-6
TRIM_REL = 1e-12
DEFAULT_L = 30


@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial with complex coefficients in ascending degree."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if len(c) == 0:
            c = np.zeros(1, dtype=complex)
        top = np.max(np.abs(c))
        nz = np.flatnonzero(np.abs(c) > TRIM_REL * top) if top > 0 else []
        c = c[: nz[-1] + 1] if len(nz) else c[:1] * 0
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, u):
        return np.polynomial.polynomial.polyval(u, self.coeffs)

    def __mul__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(np.convolve(self.coeffs, other.coeffs))

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(max(n, len(self.coeffs)), dtype=complex)
        out[: len(self.coeffs)] = self.coeffs
        return out

    @property
    def scale(self) -> float:
        return float(max(1.0, np.max(np.abs(self.coeffs))))

    def deviation(self, other: "ComplexPoly") -> float:
        n = max(len(self.coeffs), len(other.coeffs))
        return float(np.max(np.abs(self.padded(n) - other.padded(n))))

    def conj(self) -> "ComplexPoly":
        return ComplexPoly(self.coeffs.conj())

    def rounded(self) -> "ComplexPoly":
        """Round to integer coefficients; RoundingFailure past the guard."""
        r = np.round(self.coeffs.real)
        res = np.max(np.abs(self.coeffs - r))
        if res > ROUND_GUARD:
            raise RoundingFailure(f"coefficients are {res:.3g} away from integers")
        return ComplexPoly(r)

    def integer_coeffs(self) -> list[int]:
        return [int(x) for x in self.rounded().coeffs.real]

    def to_json(self) -> list[list[float]]:
        return [[float(z.real), float(z.imag)] for z in self.coeffs]


def poly_from_roots(lams) -> ComplexPoly:
    """prod (1 - lam u); numpy's monic coefficients read in reverse order."""
    lams = np.asarray(lams, dtype=complex)
    return ComplexPoly(np.poly(lams) if len(lams) else np.ones(1))


def _trivial_character(G: Graph, omega: OneForm, H: HomologyData | None) -> bool:
    if G.genus == 0:
        return True
    return character_of(H or homology_data(G), omega).is_trivial()


def lfunc_edge(G: Graph, omega=None, H: HomologyData | None = None) -> ComplexPoly:
    """det(I - u W_w). Rounded to integers when chi_w is trivial."""
    omega = _form(G, omega, H)
    p = poly_from_roots(edge_spectrum(G, omega).eigenvalues)
    if _trivial_character(G, omega, H):
        p = p.rounded()
    return p


def lfunc_ihara(G: Graph, omega=None, H: HomologyData | None = None) -> ComplexPoly:
    """(1 - u^2)^(g-1) det(I - A_w u + Q u^2).

    The determinant has degree at most 2n, so its values at 2n+1 roots of unity
    determine it exactly; an inverse FFT recovers the coefficients.
    """
    omega = _form(G, omega, H)
    A = twisted_adjacency(G, omega)
    Q = degree_matrix_minus_one(G)
    N = 2 * G.n + 1
    us = np.exp(2j * np.pi * np.arange(N) / N)
    I = np.eye(G.n)
    vals = np.array([np.linalg.det(I - A * u + Q * u * u) for u in us])
    det_poly = np.fft.fft(vals) / N  # coefficient k = (1/N) sum_j v_j u_j^(-k)
    coeffs = det_poly
    g = G.genus
    if g >= 1:
        one_minus_u2 = np.array([1.0, 0.0, -1.0])
        for _ in range(g - 1):
            coeffs = np.convolve(coeffs, one_minus_u2)
    else:
        coeffs = _divide_one_minus_u2(coeffs)
    return ComplexPoly(coeffs)


def _divide_one_minus_u2(c: np.ndarray) -> np.ndarray:
    """Exact division by 1 - u^2 (ascending coefficients); the remainder must vanish."""
    c = np.asarray(c, dtype=complex)
    q = np.zeros(max(len(c) - 2, 1), dtype=complex)
    r = c.copy()
    for k in range(len(q)):
        q[k] = r[k]
        r[k] -= q[k]
        if k + 2 < len(r):
            r[k + 2] += q[k]
    if np.max(np.abs(r), initial=0.0) > 1e-8 * max(1.0, np.max(np.abs(c))):
        raise RoundingFailure("determinant is not divisible by 1 - u^2")
    return q


# log series --------------------------------------------------------------------

@dataclass(frozen=True)
class LogSeries:
    """Coefficients c_1..c_L of log L(u, chi) = sum c_l u^l (index 0 holds c_1)."""

    coeffs: np.ndarray

    @property
    def L(self) -> int:
        return len(self.coeffs)

    def c(self, l: int) -> complex:
        return complex(self.coeffs[l - 1])

    def traces(self) -> np.ndarray:
        """l * c_l, which should equal K(w, l)."""
        return self.coeffs * np.arange(1, self.L + 1)


def neg_log_coeffs(p: ComplexPoly, L: int) -> np.ndarray:
    """Coefficients 1..L of -log p(u) for p(0) = 1.

    From p' = p (log p)': l b_l = l p_l - sum_{k<l} k b_k p_{l-k}.
    """
    a = p.padded(L + 1)
    if abs(a[0] - 1) > 1e-9:
        raise ValueError("constant term must be 1")
    b = np.zeros(L + 1, dtype=complex)
    for l in range(1, L + 1):
        s = l * a[l] - sum(k * b[k] * a[l - k] for k in range(1, l))
        b[l] = s / l
    return -b[1:]


def log_series(G: Graph, omega=None, L: int = DEFAULT_L, H: HomologyData | None = None) -> LogSeries:
    if L < 1:
        raise ValueError("truncation L must be at least 1")
    return LogSeries(neg_log_coeffs(lfunc_edge(G, omega, H), L))


# transform identities ------------------------------------------------------------

@dataclass
class TransformReport:
    deviations: dict[str, float]
    tol: float

    @property
    def passed(self) -> bool:
        return all(d <= self.tol for d in self.deviations.values())

    def to_dict(self) -> dict:
        return {"passed": self.passed, "tol": self.tol, "deviations": self.deviations}


def verify_transforms(
    G: Graph,
    Q: QuotientGroup,
    L: int = 15,
    H: HomologyData | None = None,
    budget: int = 10**6,
    tol: float = 1e-7,
    class_counts=None,
) -> TransformReport:
    """Check four finite-group identities between log L(u, chi) and log z_a(u).

    Coefficients of log z_a are ``N(a, l) / l`` from the counting module (or
    from ``class_counts`` when given); log L comes from the polynomial route.

    * dual_forward:   log L(u, chi_w) = sum_a chi_w(a) log z_a(u), each w in Q^
    * dual_inverse:   (1/|Q|) sum_w chi_{-w}(a) log L(u, chi_w) = log z_a(u)
    * total:          log z(u) = sum_a log z_a(u)
    * average:        (1/|Q|) sum_w log L(u, chi_w) = log z_0(u)
    """
    from .counting import counts_mod_lattice

    H = H or homology_data(G)
    if Q.order > budget:
        raise BudgetExceeded(f"|Q| = {Q.order} exceeds the budget of {budget}")
    counts = class_counts or counts_mod_lattice(G, Q, L, H=H)
    elems = Q.elements
    ls = np.arange(1, L + 1)
    logz_cls = {a: np.asarray(counts.N[a][:L], dtype=float) / ls for a in elems}
    logL = {k: log_series(G, form_of(H, Q.dual_character(k)), L, H).coeffs for k in elems}
    logz = log_series(G, None, L, H).coeffs

    dev = {"dual_forward": 0.0, "dual_inverse": 0.0, "total": 0.0, "average": 0.0}
    for k in elems:
        rhs = sum(Q.pairing(k, a) * logz_cls[a] for a in elems)
        dev["dual_forward"] = max(dev["dual_forward"], _maxdiff(logL[k], rhs))
    for a in elems:
        lhs = sum(np.conj(Q.pairing(k, a)) * logL[k] for k in elems) / Q.order
        dev["dual_inverse"] = max(dev["dual_inverse"], _maxdiff(lhs, logz_cls[a]))
    dev["total"] = _maxdiff(logz, sum(logz_cls.values()))
    zero = tuple(0 for _ in Q.invariants)
    dev["average"] = _maxdiff(sum(logL.values()) / Q.order, logz_cls[zero])
    return TransformReport(dev, tol)


def _maxdiff(x, y) -> float:
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y)), initial=0.0))
