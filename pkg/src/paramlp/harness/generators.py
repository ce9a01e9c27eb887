"""Deterministic LP instance generators and built-in fixtures."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict

from .. import linalg
from ..model import LinearProgram, ParametricPair, build_parametric_pair, validate_standard_form
from ..scalar import EXACT_ARITH, Arithmetic
from .rng import SplitMix64

KLEE_MINTY = "klee_minty"
RANDOM_BOUNDED = "random_bounded"
FIXTURE = "fixture"

# entry ranges of gen_random_bounded
A_RANGE = (-9, 9)
X0_RANGE = (0, 5)
W_RANGE = (-5, 5)
Y_RANGE = (0, 5)


def gen_klee_minty(D: int, arith: Arithmetic = EXACT_ARITH) -> LinearProgram:
    """Klee–Minty cube in standard form (``n = 2D``, ``m = D``).

    ``max sum_j 10^(D-j) x_j`` subject to
    ``2 sum_{j<i} 10^(i-j) x_j + x_i <= 100^(i-1)``, with one slack per row and
    the objective negated for minimization.  ``meta["start"]`` is the slack
    basis at the origin.
    """
    if not 1 <= D <= 12:
        raise ValueError(f"Klee-Minty dimension must be in 1..12, got {D}")
    A, b = [], []
    for i in range(1, D + 1):
        row = [0] * (2 * D)
        for j in range(1, i):
            row[j - 1] = 2 * 10 ** (i - j)
        row[i - 1] = 1
        row[D + i - 1] = 1
        A.append(row)
        b.append(100 ** (i - 1))
    c = [-(10 ** (D - j)) for j in range(1, D + 1)] + [0] * D
    return validate_standard_form(
        {"A": A, "b": b, "c": c, "name": f"klee_minty_D{D}",
         "meta": {"kind": KLEE_MINTY, "D": D, "start": list(range(D, 2 * D))}},
        arith,
    )


def gen_random_bounded(m: int, n: int, seed: int, arith: Arithmetic = EXACT_ARITH) -> LinearProgram:
    """Random LP that is feasible and bounded by construction.

    Draws (in this order, row-major) integer ``A`` in [-9, 9], ``x0`` in [0, 5],
    ``w`` in [-5, 5] and ``y`` in [0, 5], then sets ``b = A x0`` and
    ``c = A^T w + y``.  The certificates are kept in ``meta``.
    """
    if not (1 <= m < n <= 30):
        raise ValueError(f"need 1 <= m < n <= 30, got m={m}, n={n}")
    rng = SplitMix64(seed)
    A = [[rng.randint(*A_RANGE) for _ in range(n)] for _ in range(m)]
    x0 = [rng.randint(*X0_RANGE) for _ in range(n)]
    w = [rng.randint(*W_RANGE) for _ in range(m)]
    y = [rng.randint(*Y_RANGE) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = [sum(w[i] * A[i][j] for i in range(m)) + y[j] for j in range(n)]
    meta = {"kind": RANDOM_BOUNDED, "m": m, "n": n, "seed": seed, "x0": x0, "w": w, "y": y}
    return validate_standard_form(
        {"A": A, "b": b, "c": c, "name": f"random_m{m}_n{n}_s{seed}", "meta": meta}, arith
    )


def corpus_dims(seed: int) -> tuple:
    """``(m, n)`` of the oracle-equivalence corpus member for ``seed``.

    ``n`` in [3, 10] and ``m`` in [1, min(8, n - 2)], drawn from a SplitMix64
    stream keyed on ``seed``; ``n >= m + 2`` keeps every member embeddable.
    """
    rng = SplitMix64(seed ^ 0xC0FFEE)
    n = rng.randint(3, 10)
    m = rng.randint(1, min(8, n - 2))
    return m, n


def corpus_instance(seed: int, arith: Arithmetic = EXACT_ARITH) -> LinearProgram:
    m, n = corpus_dims(seed)
    return gen_random_bounded(m, n, seed, arith)


def gen_random_pair(n: int, seed: int) -> ParametricPair:
    """Assumption-clean exact pair with ``l = r = 1`` and ``m = n - 2``.

    ``A`` is redrawn from the same stream until it has full row rank; ``B`` is
    a random integer combination of the two-dimensional complement of ``A``;
    ``d`` and ``c`` are nonnegative integers.
    """
    if not 3 <= n <= 30:
        raise ValueError(f"need 3 <= n <= 30, got {n}")
    m = n - 2
    rng = SplitMix64(seed)
    while True:
        A = [[Fraction(rng.randint(*A_RANGE)) for _ in range(n)] for _ in range(m)]
        if linalg.rank(A, EXACT_ARITH) == m:
            break
    null = linalg.nullspace(A, n, EXACT_ARITH)
    while True:
        alpha, beta = rng.randint(-3, 3), rng.randint(-3, 3)
        if alpha or beta:
            break
    B = linalg.primitive_integer([alpha * p + beta * q for p, q in zip(*null)])
    d = [rng.randint(*X0_RANGE) for _ in range(n)]
    c = [rng.randint(*Y_RANGE) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, d)) for row in A]
    lp = validate_standard_form(
        {"A": A, "b": b, "c": c, "name": f"pair_n{n}_s{seed}",
         "meta": {"kind": "random_pair", "n": n, "seed": seed}}
    )
    return build_parametric_pair(lp, d, [B])


def fixture_t1(arith: Arithmetic = EXACT_ARITH) -> LinearProgram:
    """``min 2x1 + x2  s.t.  x1 + x2 + x3 = 3,  x >= 0``."""
    return validate_standard_form(
        {"A": [[1, 1, 1]], "b": [3], "c": [2, 1, 0], "name": "T1", "meta": {"kind": FIXTURE}}, arith
    )


def fixture_t1_pair(arith: Arithmetic = EXACT_ARITH) -> ParametricPair:
    return build_parametric_pair(fixture_t1(arith), [1, 1, 1], [[1, -1, 0]])


FIXTURES = {"T1": fixture_t1}


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    params: Dict[str, Any] = field(default_factory=dict, hash=False)
    name: str = ""

    def build(self, arith: Arithmetic = EXACT_ARITH) -> LinearProgram:
        kind = self.kind.replace("-", "_")
        if kind == KLEE_MINTY:
            lp = gen_klee_minty(int(self.params["D"]), arith)
        elif kind in (RANDOM_BOUNDED, "random"):
            p = self.params
            if "m" in p:
                lp = gen_random_bounded(int(p["m"]), int(p["n"]), int(p["seed"]), arith)
            else:
                lp = corpus_instance(int(p["seed"]), arith)
        elif kind == FIXTURE:
            key = self.params.get("name", self.name)
            if key not in FIXTURES:
                raise ValueError(f"unknown fixture {key!r}")
            lp = FIXTURES[key](arith)
        else:
            raise ValueError(f"unknown instance kind {self.kind!r}")
        if self.name and self.name != lp.name:
            lp = replace(lp, name=self.name)
        return lp


def pair_corpus_params(count: int = 50) -> list:
    """``(n, seed)`` of the random-pair corpus: seeds 1..count, ``n = 3 + seed mod 8``."""
    return [(3 + seed % 8, seed) for seed in range(1, count + 1)]


def pair_corpus(count: int = 50) -> list:
    return [gen_random_pair(n, seed) for n, seed in pair_corpus_params(count)]
