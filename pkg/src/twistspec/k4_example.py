"""Worked example on the complete graph K4, with its known sequences.

Edges of ``graph.k4()`` are 12, 23, 34, 41, 13, 24 (vertices 1..4 -> 0..3).
``omega_1 = (1/6)(de12 + de23 + de34 + de41)`` has order 3; its kernel is the
lattice of the order-3 quotient. ``omega_4`` is half of it and cuts out the
order-6 quotient. Class ``i`` of either quotient is ``i`` times the class of
the triangle 1 -> 2 -> 3 -> 1.
"""

from __future__ import annotations

import math

import numpy as np

from .counting import (
    EXP,
    class_trace_formula_eval,
    counts_mod_lattice,
    trace_distribution,
    trace_formula_eval,
    round_counts,
    vanishing_check,
)
from .graph import k4
from .homology import (
    OneForm,
    abelianize,
    character_kernel,
    character_of,
    homology_data,
    quotient_group,
)
from .twist import edge_spectrum

L = 15

TRACE_0 = [0, 0, 24, 24, 0, 96, 168, 168, 528, 1200, 1848, 3960, 8736, 16128, 31944]
TRACE_1 = [0, 0, -12, 12, 0, -12, 0, 36, 96, -60, 0, -252, 0, -252, 768]

ORDER3 = {
    "N": {
        0: [0, 0, 0, 16, 0, 24, 56, 80, 240, 360, 616, 1152, 2912, 5208, 11160],
        1: [0, 0, 12, 4, 0, 36, 56, 44, 144, 420, 616, 1404, 2912, 5460, 10392],
        2: [0, 0, 12, 4, 0, 36, 56, 44, 144, 420, 616, 1404, 2912, 5460, 10392],
    },
    "pi": {
        0: [0, 0, 0, 4, 0, 4, 8, 8, 24, 36, 56, 92, 224, 368, 744],
        1: [0, 0, 4, 1, 0, 4, 8, 5, 16, 42, 56, 114, 224, 386, 692],
        2: [0, 0, 4, 1, 0, 4, 8, 5, 16, 42, 56, 114, 224, 386, 692],
    },
    "pi_c": {
        0: [0, 0, 0, 4, 0, 4, 8, 12, 32, 36, 56, 102, 224, 376, 744],
        1: [0, 0, 4, 1, 0, 8, 8, 6, 16, 42, 56, 122, 224, 394, 696],
        2: [0, 0, 4, 1, 0, 8, 8, 6, 16, 42, 56, 122, 224, 394, 696],
    },
}


def _interleave(seq, keep_odd: bool):
    return [v if (l % 2 == 1) == keep_odd else 0 for l, v in enumerate(seq, start=1)]


# In the order-6 quotient each order-3 class splits by the parity of l.
ORDER6 = {
    table: {
        0: _interleave(ORDER3[table][0], False),
        3: _interleave(ORDER3[table][0], True),
        1: _interleave(ORDER3[table][1], True),
        5: _interleave(ORDER3[table][1], True),
        2: _interleave(ORDER3[table][1], False),
        4: _interleave(ORDER3[table][1], False),
    }
    for table in ORDER3
}

EXP_IDENTITY = 5.172675227
EXP_CLASS_IDENTITY = 2.141622583


def exp_closed_form() -> float:
    """e^2 + 3e + 2/e + 6 e^(-1/2) cos(sqrt(7)/2) - 12."""
    return math.e**2 + 3 * math.e + 2 / math.e + 6 * math.exp(-0.5) * math.cos(math.sqrt(7) / 2) - 12


def omega(k: int) -> OneForm:
    """(1/k)(de12 + de23 + de34 + de41)."""
    return OneForm(np.array([1, 1, 1, 1, 0, 0]) / k)


TRIANGLE = [0, 1, 4 + 6]  # 1->2, 2->3, 3->1 (inverse of edge 13)


def quotients():
    """(H, Q3, Q6, class labels) with labels[order][i] = class of i * triangle."""
    G = k4()
    H = homology_data(G)
    tri = abelianize(H, TRIANGLE)
    out = {}
    for order, k in ((3, 6), (6, 12)):
        Q = quotient_group(H, character_kernel(character_of(H, omega(k)), order))
        out[order] = (Q, {i: Q.class_of([i * x for x in tri]) for i in range(order)})
    return G, H, out


def _check(computed, expected) -> dict:
    return {"computed": computed, "expected": expected, "passed": computed == expected}


def report() -> tuple[dict, str]:
    """Every sequence and identity of the example with a pass flag, plus a CSV of counts."""
    G, H, quots = quotients()
    items: dict[str, dict] = {}
    items["K(0,l)"] = _check(round_counts(trace_distribution(G, None, L)), TRACE_0)
    items["K(omega_1,l)"] = _check(round_counts(trace_distribution(G, omega(6), L)), TRACE_1)
    items["K(omega_3,l)"] = _check(
        round_counts(trace_distribution(G, omega(4), L)), [(-1) ** l * v for l, v in enumerate(TRACE_0, 1)]
    )
    items["K(omega_4,l)"] = _check(
        round_counts(trace_distribution(G, omega(12), L)), [(-1) ** l * v for l, v in enumerate(TRACE_1, 1)]
    )
    csv_lines = ["quotient,class,l,N,pi,pi_c"]
    for order, ref in ((3, ORDER3), (6, ORDER6)):
        Q, labels = quots[order]
        counts = counts_mod_lattice(G, Q, L, H)
        for table, per_class in ref.items():
            for i, expected in per_class.items():
                items[f"order{order}:{table}(class {i})"] = _check(counts.row(table, labels[i]), expected)
        for i in range(order):
            a = labels[i]
            for l in range(1, L + 1):
                csv_lines.append(
                    f"{order},{i},{l},{counts.row('N', a)[l - 1]},{counts.row('pi', a)[l - 1]},{counts.row('pi_c', a)[l - 1]}"
                )
        vr = vanishing_check(G, counts, H)
        items[f"order{order}:vanishing"] = {
            "computed": vr.to_dict(),
            "expected": {"applicable": order == 6},
            "passed": vr.passed and vr.applicable == (order == 6),
        }
    tf = trace_formula_eval(G, None, EXP, 40, H)
    items["exp identity"] = {
        "computed": tf.to_dict(),
        "expected": EXP_IDENTITY,
        "passed": abs(tf.spectral_side - EXP_IDENTITY) < 1e-6 and abs(tf.series_side - EXP_IDENTITY) < 1e-6,
    }
    Q3, labels3 = quots[3]
    cf = class_trace_formula_eval(G, Q3, labels3[0], EXP, 40, H)
    items["class exp identity"] = {
        "computed": cf.to_dict(),
        "expected": EXP_CLASS_IDENTITY,
        "passed": abs(cf.spectral_side - EXP_CLASS_IDENTITY) < 1e-6
        and abs(cf.series_side - EXP_CLASS_IDENTITY) < 1e-6,
    }
    antisym = edge_spectrum(G, omega(12)).distance(-edge_spectrum(G, omega(6)))
    items["spec W(omega_4) = -spec W(omega_1)"] = {
        "computed": antisym,
        "expected": 0.0,
        "passed": antisym < 1e-7,
    }
    doc = {
        "graph": "K4",
        "L": L,
        "invariants": {str(o): list(quots[o][0].invariants) for o in quots},
        "passed": all(v["passed"] for v in items.values()),
        "items": items,
    }
    return doc, "\n".join(csv_lines) + "\n"
