"""
Acceptance suite: nine criteria, each with its time bound.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from golden_cases import CASES, GOLDEN  # noqa: E402
from orbitlab.cli import main  # noqa: E402
from orbitlab.exactalg import Matrix  # noqa: E402
from orbitlab.gradedsl2 import (  # noqa: E402
    GradedDecomposition as G,
    decompositions_upto,
    enumerate_decompositions,
    interaction_sum,
    is_regular,
    trace_bruteforce,
    trace_formula,
)
from orbitlab.lseries import (  # noqa: E402
    delta_half_exponent,
    is_dominant,
    modular_exponent_PH,
    partitions_upto,
    pole_order_at_one,
    verify_identity,
    whittaker_value,
)
from orbitlab.orbits import (  # noqa: E402
    finite_field_invariants,
    is_transpose_stable,
    rank_invariant,
    representative,
    string_invariant,
    transpose_orbit,
    transpose_orbit_oracle,
)
from orbitlab.symspace import (  # noqa: E402
    CosetInvariant,
    coset_invariants,
    is_closed,
    normal_space_dim,
    rep_nu_block,
    rep_xpk,
)

RESULTS: dict[int, str] = {}


def c1_trace_oracle():
    ds = list(decompositions_upto(8))
    bad = [d for d in ds if trace_formula(d) != trace_bruteforce(d)]
    return not bad and len(ds) > 100, f"{len(ds)} decompositions, {len(bad)} mismatches"


def c2_anchor():
    d = G.of((8, 1), (2, 1), (1, 1))
    inv = rank_invariant(representative(d))
    checks = {
        "sum_m": interaction_sum(d) == -4,
        "trace": trace_formula(d) == 96 == 2 * 6 * 8,
        "ranks": (inv.rank_x, inv.rank_y) == (6, 5),
        "unstable": not is_transpose_stable(d),
    }
    return all(checks.values()), ", ".join(f"{k}={v}" for k, v in checks.items())


def c3_regular_trace():
    details = []
    ok = True
    for p in range(0, 7):
        q = p + 1
        hits = [d for d in enumerate_decompositions(p, q) if trace_formula(d) == 2 * p * q]
        good = (
            len(hits) == 1
            and len(hits[0]) == 1
            and is_transpose_stable(hits[0])
            and is_regular(hits[0], p, q)
        )
        ok = ok and good
        details.append(f"p={p}:{len(hits)}")
    return ok, " ".join(details)


def c4_inequality():
    total = 0
    for p in range(1, 5):
        for d in enumerate_decompositions(p, p):
            total += 1
            if not 2 * p * p < trace_formula(d) <= 4 * p * p:
                return False, f"violated at {d}"
    return True, f"{total} decompositions with p = q <= 4"


def c5_classification():
    sizes = [(p, q) for p in range(1, 7) for q in range(1, 7) if 2 * p * q <= 12]
    for p, q in sizes:
        invs = finite_field_invariants(p, q, 2)
        ds = enumerate_decompositions(p, q)
        if len(invs) != len(ds) or invs != {string_invariant(d) for d in ds}:
            return False, f"F_2 count mismatch at ({p},{q}): {len(invs)} vs {len(ds)}"
    ds = list(decompositions_upto(8))
    bad = [d for d in ds if transpose_orbit(d) != transpose_orbit_oracle(d)]
    return not bad, f"{len(sizes)} F_2 sizes; transpose rule on {len(ds)} orbits, {len(bad)} mismatches"


def c6_closed_cosets():
    a_pool = [Fraction(v) for v in (2, -2, 3, -3, 5)]
    for p in range(0, 5):
        for q in (p, p + 1):
            if p + q == 0:
                continue
            for k in range(p + 1):
                x = rep_xpk(p, q, k)
                if x @ x != Matrix.identity(p + q) or not is_closed(x, p, q):
                    return False, f"x_{{{p},{k}}} at q={q}"
                if p >= 1 and normal_space_dim(x, p, q) != 2 * k * k + 2 * (p - k) * (q - k):
                    return False, f"normal dim at {(p, q, k)}"
    trips = 0
    for p in range(1, 4):
        for q in (p, p + 1):
            for k in range(p + 1):
                for nu in range(1, p - k + 1):
                    for a in itertools.combinations_with_replacement(a_pool, nu):
                        g = rep_nu_block(p, q, k, list(a))
                        trips += 1
                        if not is_closed(g, p, q) or coset_invariants(g, p, q) != CosetInvariant(k, nu, tuple(sorted(a))):
                            return False, f"round trip {(p, q, k, a)}"
    return True, f"{trips} nu-block round trips"


def c7_macdonald():
    cases = [(1, 8), (3, 6), (5, 4)]
    res = {nd: verify_identity(*nd) for nd in cases}
    return all(res.values()), ", ".join(f"(n,D)={nd}:{v}" for nd, v in res.items())


def c8_whittaker_delta():
    chi = [Fraction(1), Fraction(2), Fraction(3)]
    w0 = whittaker_value((0, 0, 0), chi)
    if not (w0.coeff == 1 and w0.q_power.exponent == 0):
        return False, "W(0) != 1"
    for lam in itertools.product(range(-2, 3), repeat=3):
        if (whittaker_value(lam, chi).coeff != 0) != is_dominant(lam):
            return False, f"dominance at {lam}"
    for p in (1, 2):
        n = 2 * p + 1
        for lam in partitions_upto(6, n, n - 1):
            if modular_exponent_PH(lam, p) != delta_half_exponent(lam, n):
                return False, f"delta at {lam}"
    F = Fraction
    orders = (
        pole_order_at_one([F(1)] * 3, 1).order,
        pole_order_at_one([F(2), F(1, 2), F(1)], 1).order,
        pole_order_at_one([F(2), F(2), F(1, 4)], 1).order,
    )
    return orders == (5, 1, -1), f"pole orders {orders}"


def c9_cli_golden():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "out.json"
        for name, argv in CASES.items():
            expected = (GOLDEN / f"{name}.json").read_text()
            for threads in ("1", "4"):
                code = main(argv + ["--threads", threads, "--out", str(out)])
                if code != 0 or out.read_text() != expected:
                    return False, f"{name} at {threads} threads"
    return True, f"{len(CASES)} invocations x 2 thread counts"


CRITERIA = [
    (1, "trace formula vs oracle, p+q <= 8", c1_trace_oracle, 60),
    (2, "(6,8) anchor", c2_anchor, 5),
    (3, "trace 2p(p+1) singles out the regular orbit, q = p+1, p <= 6", c3_regular_trace, 120),
    (4, "2p^2 < trace <= 4p^2, p = q <= 4", c4_inequality, 60),
    (5, "classification completeness over F_2 and transpose rule", c5_classification, 120),
    (6, "closed-coset suite", c6_closed_cosets, 30),
    (7, "series identity", c7_macdonald, 60),
    (8, "Whittaker / delta / pole orders", c8_whittaker_delta, 10),
    (9, "CLI golden files at 1 and 4 threads", c9_cli_golden, 60),
]


def run_criterion(number, label, fn, bound):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < bound
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {label} ({elapsed:.2f}s < {bound}s) {detail}"
    RESULTS[number] = line
    print(line)
    return passed, line


@pytest.mark.parametrize("number,label,fn,bound", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, label, fn, bound):
    passed, line = run_criterion(number, label, fn, bound)
    assert passed, line


if __name__ == "__main__":
    results = [run_criterion(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
