"""Trace distributions and circuit counts per homology class.

``K(w, l) = tr W_w^l`` is a trigonometric polynomial on the character torus
whose Fourier coefficients are the circuit counts ``N(a, l)``. Counts are
recovered exactly, either over a finite quotient ``Q = Z^g / Lambda`` or over a
box of ``Z^g`` by a DFT on a grid fine enough to leave no aliasing, and
cross-checked against direct enumeration of circuits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import default_budget
from .errors import (
    BudgetExceeded,
    NonIntegerResult,
    NumericalError,
    RoundingFailure,
    TailBoundViolated,
)
from .graph import Graph, edge_adjacency, is_bipartite, two_core
from .homology import (
    HomologyData,
    QuotientGroup,
    e,
    form_of,
    homology_data,
)
from .twist import _form, canonical_character, edge_spectrum, torus_grid, twisted_edge_adjacency

ROUND_GUARD = 1e-6
IMAG_GUARD = 1e-8


# trace distribution ------------------------------------------------------------

def trace_distribution(G: Graph, omega=None, L: int = 15, H: HomologyData | None = None) -> np.ndarray:
    """K(w, l) for l = 1..L as a real array (index 0 holds l = 1)."""
    if L < 1:
        raise ValueError("L must be at least 1")
    if omega is None:
        return np.array(integer_traces(G, L), dtype=float)
    lams = edge_spectrum(G, omega, H).eigenvalues
    return _power_sums(lams, L)


def integer_traces(G: Graph, L: int) -> list[int]:
    """Untwisted traces tr W1^l computed in exact integer arithmetic.

    Floating power sums lose absolute accuracy once rho^l passes ~1e9, which
    would spoil the integer guard on graphs with a large Perron root.
    """
    if G.genus < 1:
        return [0] * L
    core = two_core(G)[0]
    W = edge_adjacency(core).astype(object)
    P, out = W.copy(), []
    for _ in range(L):
        out.append(int(np.trace(P)))
        P = P.dot(W)
    return out


def _power_sums(lams: np.ndarray, L: int) -> np.ndarray:
    powers = np.cumprod(np.tile(lams, (L, 1)), axis=0)  # row l-1 holds lam^l
    K = powers.sum(axis=1)
    # K can cancel to ~0, so the guard is relative to sum |lam|^l
    scale = np.maximum(1.0, np.abs(powers).sum(axis=1))
    if np.any(np.abs(K.imag) > IMAG_GUARD * scale + 1e-9):
        raise NumericalError("trace has a non-negligible imaginary part")
    return K.real.copy()


def trace_by_multiplication(G: Graph, omega=None, L: int = 6, H: HomologyData | None = None) -> np.ndarray:
    """tr W_w^l by repeated matrix products (a spot check, small L only)."""
    W = twisted_edge_adjacency(G, omega, H)
    out, P = [], np.eye(len(W), dtype=complex)
    for _ in range(L):
        P = P @ W
        out.append(np.trace(P))
    return np.array(out)


def round_counts(x, what: str = "count") -> list[int]:
    x = np.asarray(x)
    r = np.round(x.real)
    res = np.max(np.abs(x - r), initial=0.0)
    if res > ROUND_GUARD:
        raise RoundingFailure(f"{what} is {res:.3g} away from an integer")
    return [int(v) for v in r]


# class counts -------------------------------------------------------------------

@dataclass
class ClassCounts:
    """Per-class sequences for l = 1..L (list index l-1).

    ``kind`` is ``"quotient"`` (labels are SNF coordinates of Q) or ``"box"``
    (labels are vectors of Z^g; classes absent from ``N`` have zero counts).
    """

    kind: str
    L: int
    N: dict[tuple, list[int]]
    pi: dict[tuple, list[int]] = field(default_factory=dict)
    pi_c: dict[tuple, list[int]] = field(default_factory=dict)
    group: QuotientGroup | None = None

    def row(self, table: str, label: Sequence[int]) -> list[int]:
        return getattr(self, table).get(tuple(label), [0] * self.L)

    def total(self, table: str = "N") -> list[int]:
        rows = getattr(self, table).values()
        return [sum(r[l] for r in rows) for l in range(self.L)]

    def labels(self) -> list[tuple]:
        if self.kind == "quotient" and self.group is not None:
            return self.group.elements
        return sorted(self.N)

    def project(self, Q: QuotientGroup) -> "ClassCounts":
        """Push box counts forward to the classes of Q (sums every table)."""
        if self.kind != "box":
            raise ValueError("only box counts can be projected")
        out = {}
        for name in ("N", "pi", "pi_c"):
            acc = {a: [0] * self.L for a in Q.elements}
            for alpha, seq in getattr(self, name).items():
                row = acc[Q.class_of(alpha)]
                for i, v in enumerate(seq):
                    row[i] += v
            out[name] = acc
        return ClassCounts("quotient", self.L, out["N"], out["pi"], out["pi_c"], Q)

    def agrees_with(self, other: "ClassCounts", tables=("N",), L: int | None = None) -> bool:
        L = min(self.L, other.L) if L is None else L
        for name in tables:
            a, b = getattr(self, name), getattr(other, name)
            for label in set(a) | set(b):
                if self.row(name, label)[:L] != other.row(name, label)[:L]:
                    return False
        return True

    def to_csv(self) -> str:
        lines = ["class,l,N,pi,pi_c"]
        for label in self.labels():
            tag = " ".join(str(x) for x in label)
            for l in range(1, self.L + 1):
                vals = [self.row(t, label)[l - 1] if getattr(self, t) else "" for t in ("N", "pi", "pi_c")]
                lines.append(f"{tag},{l},{vals[0]},{vals[1]},{vals[2]}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        def enc(table):
            return {" ".join(map(str, k)): v for k, v in sorted(table.items())}

        return {
            "kind": self.kind,
            "L": self.L,
            "invariants": list(self.group.invariants) if self.group else None,
            "N": enc(self.N),
            "pi": enc(self.pi),
            "pi_c": enc(self.pi_c),
        }


def counts_mod_lattice(
    G: Graph, Q: QuotientGroup, L: int, H: HomologyData | None = None, budget: int | None = None
) -> ClassCounts:
    """N(a, l) = (1/|Q|) sum_w conj(chi_w(a)) K(w, l) over the dual group of Q,
    followed by the prime and cycle counts."""
    H = H or homology_data(G)
    budget = default_budget() if budget is None else budget
    if Q.order > budget:
        raise BudgetExceeded(f"|Q| = {Q.order} exceeds the budget of {budget}")
    N_float = class_counts_float(G, Q, L, H)
    N = {a: round_counts(N_float[i], f"N({a})") for i, a in enumerate(Q.elements)}
    counts = ClassCounts("quotient", L, N, group=Q)
    return prime_counts(counts)


def class_counts_float(G: Graph, Q: QuotientGroup, L: int, H: HomologyData | None = None) -> np.ndarray:
    """Unrounded N(a, l) as an array indexed [class, l - 1] in ``Q.elements`` order.

    Doubles carry the counts exactly only while they stay below roughly 1e9;
    past that the rounding guard in ``counts_mod_lattice`` fails by design.
    """
    H = H or homology_data(G)
    elems = Q.elements
    traces = np.array([trace_distribution(G, form_of(H, Q.dual_character(k)), L) for k in elems])
    table = np.array([[Q.pairing(k, a) for a in elems] for k in elems])  # [k, a]
    return table.conj().T @ traces / Q.order


def reconstruct_traces(counts: ClassCounts) -> dict[tuple, np.ndarray]:
    """K(w, l) = sum_a chi_w(a) N(a, l) for every w in the dual of Q."""
    Q = counts.group
    out = {}
    for k in Q.elements:
        out[k] = sum(Q.pairing(k, a) * np.asarray(counts.N[a], dtype=float) for a in Q.elements).real
    return out


def counts_integral(
    G: Graph, H: HomologyData | None = None, L: int = 8, box: int | None = None, budget: int | None = None
) -> ClassCounts:
    """N(a, l) for a in Z^g with |a_i| <= box, as an exact DFT over the torus.

    K(., l) has degree at most l in each coordinate, so a uniform grid of
    2L+1 points per axis integrates every K(., l), l <= L, exactly.
    """
    H = H or homology_data(G)
    g = H.g
    box = L if box is None else box
    budget = default_budget() if budget is None else budget
    if g == 0:
        return ClassCounts("box", L, {})
    P = 2 * L + 1
    if P**g > budget:
        raise BudgetExceeded(f"{P}^{g} grid points exceed the budget of {budget}")
    grid = grid_traces(G, H, torus_grid(g, P), L).reshape((P,) * g + (L,))
    # sum_c K(c) e(-c.a) is numpy's forward FFT over the grid axes
    coeff = np.fft.fftn(grid, axes=tuple(range(g))) / P**g
    N: dict[tuple, list[int]] = {}
    rng = range(-min(box, L), min(box, L) + 1)
    for alpha in _box(g, rng):
        idx = tuple(a % P for a in alpha)
        row = round_counts(coeff[idx], f"N({alpha})")
        if any(row):
            N[alpha] = row
    return prime_counts(ClassCounts("box", L, N))


def grid_traces(G: Graph, H: HomologyData, coords: np.ndarray, L: int, chunk: int = 2048) -> np.ndarray:
    """K(c, l) for every row c of ``coords`` (character coordinates), l = 1..L.

    Works on the 2-core and batches the eigensolver over grid points.
    """
    core, edge_map, _ = two_core(G)
    W1 = edge_adjacency(core)
    pos = {edge: j for j, edge in enumerate(edge_map)}
    cols = [pos[edge] for edge in H.tree.non_tree_edges]  # non-tree edges survive trimming
    m = core.m
    out = np.empty((len(coords), L))
    for start in range(0, len(coords), chunk):
        block = coords[start : start + chunk]
        forms = np.zeros((len(block), m))
        forms[:, cols] = block
        gains = e(np.concatenate([forms, -forms], axis=1))
        lams = np.linalg.eigvals(W1[None, :, :] * gains[:, None, :])
        powers = np.cumprod(np.repeat(lams[:, None, :], L, axis=1), axis=1)
        K = powers.sum(axis=2)
        scale = np.maximum(1.0, np.abs(powers).sum(axis=2))
        if np.any(np.abs(K.imag) > IMAG_GUARD * scale + 1e-9):
            raise NumericalError("trace has a non-negligible imaginary part")
        out[start : start + len(block)] = K.real
    return out


def _box(g: int, rng: range):
    import itertools

    return itertools.product(rng, repeat=g)


# brute force oracle --------------------------------------------------------------

@dataclass
class Census:
    circuits: int
    walks_visited: int
    lengths: list[int]
    """Circuit lengths that occur."""

    @property
    def nu(self) -> int:
        return math.gcd(*self.lengths) if self.lengths else 0


def brute_force(
    G: Graph, H: HomologyData | None = None, L_max: int = 8, budget: int | None = None
) -> tuple[ClassCounts, Census]:
    """Enumerate every circuit of length <= L_max.

    A circuit is a cyclic sequence of oriented edges in which each feeds into
    the next, including last into first. Each rotation class is found through
    the rotations that start at its smallest edge index ``s`` (only edges
    ``>= s`` are followed). A class of minimal period ``p`` in which ``s``
    occurs ``k`` times per period is met ``k`` times and holds ``p`` circuits.
    Counts follow directly: N counts circuits, pi counts classes with
    ``p = l``, pi_c counts all classes. Nothing spectral is used.
    """
    H = H or homology_data(G)
    budget = default_budget() if budget is None else budget
    m2 = 2 * G.m
    g = H.g
    step: list[tuple[int, int] | None] = [None] * m2
    for i, edge in enumerate(H.tree.non_tree_edges):
        step[edge] = (i, 1)
        step[G.inverse(edge)] = (i, -1)
    succ = [G.successors(a) for a in range(m2)]
    # found[(alpha, l, p, k)] = number of sequences met with these parameters
    found: dict[tuple, int] = {}
    visited = 0
    walk: list[int] = []
    alpha = [0] * g

    for start in range(m2):
        allowed = [tuple(b for b in succ[a] if b >= start) for a in range(m2)]
        closes = [start in succ[a] for a in range(m2)]
        walk.append(start)
        if step[start]:
            alpha[step[start][0]] += step[start][1]
        stack = [iter(allowed[start])]
        visited += 1
        if closes[start]:
            _record(found, walk, alpha, start)
        while stack:
            nxt = next(stack[-1], None) if len(walk) < L_max else None
            if nxt is None:
                stack.pop()
                gone = walk.pop()
                if step[gone]:
                    alpha[step[gone][0]] -= step[gone][1]
                continue
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"circuit enumeration exceeded {budget} steps")
            walk.append(nxt)
            if step[nxt]:
                alpha[step[nxt][0]] += step[nxt][1]
            if closes[nxt]:
                _record(found, walk, alpha, start)
            stack.append(iter(allowed[nxt]))

    N: dict[tuple, list[int]] = {}
    pi: dict[tuple, list[int]] = {}
    pi_c: dict[tuple, list[int]] = {}
    lengths: set[int] = set()
    total = 0
    for (key, l, p, k), cnt in found.items():
        if cnt % k:
            raise NonIntegerResult(f"rotation class of {key}, length {l} met {cnt} times, not a multiple of {k}")
        classes = cnt // k
        lengths.add(l)
        total += classes * p
        N.setdefault(key, [0] * L_max)[l - 1] += classes * p
        pi_c.setdefault(key, [0] * L_max)[l - 1] += classes
        if p == l:
            pi.setdefault(key, [0] * L_max)[l - 1] += classes
    counts = ClassCounts("box", L_max, N, pi, pi_c)
    return counts, Census(total, visited, sorted(lengths))


def _record(found: dict, walk: list[int], alpha: list[int], start: int) -> None:
    l = len(walk)
    p = _period(walk)
    k = walk[:p].count(start)
    key = (tuple(alpha), l, p, k)
    found[key] = found.get(key, 0) + 1


def _period(walk: list[int]) -> int:
    l = len(walk)
    for p in range(1, l):
        if l % p == 0 and walk[p:] + walk[:p] == walk:
            return p
    return l


def _exact_div(a: int, b: int, label) -> int:
    if a % b:
        raise NonIntegerResult(f"{a} is not divisible by {b} for class {label}")
    return a // b


# Moebius inversion ------------------------------------------------------------

def mobius(n: int) -> int:
    if n == 1:
        return 1
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _roots_box(alpha: tuple, k: int) -> list[tuple]:
    """[a|k] in Z^g: the single b with k b = a, if it exists."""
    if all(x % k == 0 for x in alpha):
        return [tuple(x // k for x in alpha)]
    return []


def prime_counts(counts: ClassCounts) -> ClassCounts:
    """Fill ``pi`` and ``pi_c`` from ``N``.

    l pi(a, l) = sum_{d | l} mu(l/d) sum_{b : (l/d) b = a} N(b, d)
    pi_c(a, l) = sum_{d | l} sum_{b : (l/d) b = a} pi(b, d)
    """
    L = counts.L
    if counts.kind == "quotient":
        Q = counts.group
        labels = Q.elements

        def roots(a, k):
            return Q.divide(a, k)
    else:
        labels = sorted(counts.N)
        roots = _roots_box
    pi = {a: [0] * L for a in labels}
    for l in range(1, L + 1):
        for a in labels:
            s = 0
            for d in divisors(l):
                mu = mobius(l // d)
                if mu:
                    s += mu * sum(counts.row("N", b)[d - 1] for b in roots(a, l // d))
            pi[a][l - 1] = _exact_div(s, l, a)
    pi_c = {a: [0] * L for a in labels}
    for l in range(1, L + 1):
        for a in labels:
            pi_c[a][l - 1] = sum(
                pi.get(b, [0] * L)[d - 1] for d in divisors(l) for b in roots(a, l // d)
            )
    if counts.kind == "box":
        pi = {a: r for a, r in pi.items() if any(r)}
        pi_c = {a: r for a, r in pi_c.items() if any(r)}
    for table in (pi, pi_c):
        for a, r in table.items():
            if min(r, default=0) < 0:
                raise NonIntegerResult(f"negative prime count for class {a}")
    return ClassCounts(counts.kind, L, counts.N, pi, pi_c, counts.group)


# vanishing and asymptotics -----------------------------------------------------

@dataclass
class VanishingReport:
    applicable: bool
    bipartite: bool
    violations: list[tuple]
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "applicable": self.applicable,
            "bipartite": self.bipartite,
            "violations": [list(map(str, v)) for v in self.violations],
            "note": self.note,
        }


def theta_on_classes(G: Graph, counts: ClassCounts, H: HomologyData | None = None) -> dict[tuple, int] | None:
    """chi_theta on each class label as +1 / -1, or None if theta does not factor through Q."""
    H = H or homology_data(G)
    theta = canonical_character(G, H)
    if counts.kind == "box":
        return {a: _sign(e(np.dot(theta.coords, a))) for a in counts.N}
    Q = counts.group
    match = next((k for k in Q.elements if Q.dual_character(k) == theta), None)
    if match is None:
        return None
    return {a: _sign(Q.pairing(match, a)) for a in Q.elements}


def _sign(z: complex) -> int:
    return 1 if complex(z).real > 0 else -1


def vanishing_check(G: Graph, counts: ClassCounts, H: HomologyData | None = None) -> VanishingReport:
    """Classes with chi_theta = +1 have no odd-length circuits, those with -1 no
    even-length ones; a bipartite graph has no odd-length circuits at all."""
    H = H or homology_data(G)
    bip = is_bipartite(G)
    signs = theta_on_classes(G, counts, H)
    violations = []
    for table in ("N", "pi", "pi_c"):
        rows = getattr(counts, table)
        for a, row in rows.items():
            for l, v in enumerate(row, start=1):
                if not v:
                    continue
                if bip and l % 2:
                    violations.append((table, a, l, "odd length in a bipartite graph"))
                elif signs is not None and (signs[a] == 1) == (l % 2 == 1):
                    violations.append((table, a, l, f"theta sign {signs[a]:+d}"))
    note = "" if signs is not None else "canonical character does not factor through the quotient"
    return VanishingReport(signs is not None, bip, violations, note)


@dataclass
class AsymptoticTable:
    applicable: bool
    ratios: dict[tuple, list[tuple[int, float]]] = field(default_factory=dict)
    """Per class: (l, ratio) for every l in the class's nonvanishing residue."""
    note: str = ""

    def final(self) -> dict[tuple, tuple[int, float]]:
        """Ratio at the largest computed l for each class."""
        return {a: r[-1] for a, r in self.ratios.items() if r}


def asymptotic_ratio(
    counts: ClassCounts,
    rho: float,
    nu: int,
    q_order: int,
    doubling: bool = False,
    genus: int = 2,
    parity: dict[tuple, int] | None = None,
) -> AsymptoticTable:
    """pi(a, l) l |Q| / (c nu rho^l) with c = 2 when ``doubling`` else 1.

    ``parity`` maps a class to the residue of l mod 2 on which its counts can
    be nonzero (from the canonical character); other l are skipped.
    """
    if genus < 2:
        return AsymptoticTable(False, note="requires genus at least 2")
    c = 2 if doubling else 1
    out = {}
    for a, row in counts.pi.items():
        seq = []
        for l, p in enumerate(row, start=1):
            if parity is not None and l % 2 != parity[a]:
                continue
            seq.append((l, p * l * q_order / (c * nu * rho**l)))
        out[a] = seq
    return AsymptoticTable(True, out)


def nu_G(G: Graph) -> int:
    """gcd of circuit lengths: the period of the non-backtracking digraph on the 2-core."""
    core, _, _ = two_core(G)
    m2 = 2 * core.m
    level = [-1] * m2
    period = 0
    for root in range(m2):
        if level[root] >= 0:
            continue
        level[root] = 0
        stack = [root]
        while stack:
            a = stack.pop()
            for b in core.successors(a):
                if level[b] < 0:
                    level[b] = level[a] + 1
                    stack.append(b)
                else:
                    period = math.gcd(period, level[a] + 1 - level[b])
    return abs(period)


def dominant_eigen_count(G: Graph, rel_tol: float = 1e-7) -> int:
    ev = edge_spectrum(G).eigenvalues
    rho = np.max(np.abs(ev))
    return int(np.sum(np.abs(ev) >= rho * (1 - rel_tol)))


# trace formula -------------------------------------------------------------------

@dataclass(frozen=True)
class AnalyticFunction:
    """h(z) = sum_l hhat(l) z^l, given by its evaluator and coefficient map."""

    name: str
    evaluate: Callable[[complex], complex]
    coefficient: Callable[[int], float]
    radius: float = math.inf


EXP = AnalyticFunction("exp", lambda z: np.exp(z), lambda l: math.exp(-math.lgamma(l + 1)))


def monomial(j: int) -> AnalyticFunction:
    return AnalyticFunction(f"z^{j}", lambda z: z**j, lambda l: 1.0 if l == j else 0.0)


@dataclass
class TraceFormulaResult:
    spectral_side: float
    series_side: float
    tail_bound: float

    @property
    def deviation(self) -> float:
        return abs(self.spectral_side - self.series_side)

    def to_dict(self) -> dict:
        return {
            "spectral_side": self.spectral_side,
            "series_side": self.series_side,
            "deviation": self.deviation,
            "tail_bound": self.tail_bound,
        }


def _tail_bound(h: AnalyticFunction, rho: float, dim: int, L: int, extra: int = 400) -> float:
    # |K(w, l)| <= dim * rho^l
    return float(sum(abs(h.coefficient(l)) * dim * rho**l for l in range(L + 1, L + extra)))


def trace_formula_eval(
    G: Graph, omega=None, h: AnalyticFunction = EXP, L: int = 40, H: HomologyData | None = None,
    tail_tol: float = 1e-6,
) -> TraceFormulaResult:
    """sum_lam (h(lam) - h(0)) against sum_{l <= L} K(w, l) hhat(l)."""
    omega = _form(G, omega, H)
    lams = edge_spectrum(G, omega).eigenvalues
    rho = float(np.max(np.abs(lams), initial=0.0))
    if rho >= h.radius:
        raise ValueError("h must be analytic past the spectral radius")
    tail = _tail_bound(h, rho, len(lams), L)
    if tail >= tail_tol:
        raise TailBoundViolated(f"tail beyond L={L} is bounded only by {tail:.3g}")
    spectral = complex(np.sum([h.evaluate(z) - h.evaluate(0) for z in lams]))
    K = trace_distribution(G, omega, L)
    series = float(sum(K[l - 1] * h.coefficient(l) for l in range(1, L + 1)))
    return TraceFormulaResult(spectral.real, series, tail)


def class_trace_formula_eval(
    G: Graph, Q: QuotientGroup, alpha: Sequence[int], h: AnalyticFunction = EXP, L: int = 40,
    H: HomologyData | None = None, tail_tol: float = 1e-6,
) -> TraceFormulaResult:
    """sum_w conj(chi_w(a)) sum_lam (h(lam) - h(0)) against |Q| sum_l N(a, l) hhat(l).

    N(a, l) enters unrounded, so L may exceed the range where counts fit a double.
    """
    H = H or homology_data(G)
    alpha = tuple(alpha)
    N_row = class_counts_float(G, Q, L, H)[Q.elements.index(alpha)]
    spectral = 0j
    tail = 0.0
    for k in Q.elements:
        lams = edge_spectrum(G, form_of(H, Q.dual_character(k))).eigenvalues
        rho = float(np.max(np.abs(lams), initial=0.0))
        tail += _tail_bound(h, rho, len(lams), L)
        spectral += np.conj(Q.pairing(k, alpha)) * np.sum([h.evaluate(z) - h.evaluate(0) for z in lams])
    if tail >= tail_tol:
        raise TailBoundViolated(f"tail beyond L={L} is bounded only by {tail:.3g}")
    series = Q.order * sum(n.real * h.coefficient(l) for l, n in enumerate(N_row, start=1))
    return TraceFormulaResult(float(spectral.real), float(series), tail)
