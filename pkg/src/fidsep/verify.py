"""Self-checks behind ``fidsep verify`` and ``tests/test_acceptance.py``.

Each check takes a level: ``"full"`` runs the complete sample counts,
``"quick"`` a reduced subset with the same tolerances.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
import time
from contextlib import redirect_stdout
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .convex_roof import (
    RoofOptions,
    SeparableEnsemble,
    entanglement_report,
    f_sep_mixed,
    optimal_ancilla_weights,
    weighted_overlap,
)
from .core import (
    DensityMatrix,
    bell_state,
    ghz_state,
    random_density_matrix,
    random_pure_state,
    random_unit_vector,
    w_state,
)
from .fidelity import fidelity, fidelity_pure, uhlmann_fidelity
from .io import dump_state
from .oracle import brute_lambda_max
from .pure import ProductState, f_sep_pure, hermitian_overlap_bound, lambda_max, lambda_max_ascent
from .two_qubit import f_sep_two_qubit


@dataclass(frozen=True)
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.key} {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _count(level: str, full: int, quick: int) -> int:
    return full if level == "full" else quick


def check_two_qubit_theorem(level: str = "full") -> tuple[bool, str]:
    n = _count(level, 100, 12)
    worst, overshoot = 0.0, -np.inf
    for i in range(n):
        rho = random_density_matrix((2, 2), np.random.default_rng([1001, i]), rank=1 + i % 4)
        found = f_sep_mixed(rho).f_sep
        closed = f_sep_two_qubit(rho)
        worst = max(worst, abs(found - closed))
        overshoot = max(overshoot, found - closed)
    ok = worst <= 1e-3 and overshoot <= 1e-6
    return ok, f"{n} states, max |diff| = {worst:.2e} (tol 1e-3), max overshoot = {overshoot:.2e} (tol 1e-6)"


def check_bipartite_schmidt(level: str = "full") -> tuple[bool, str]:
    n = _count(level, 1000, 100)
    worst_exact, worst_ascent = 0.0, 0.0
    for i in range(n):
        rng = np.random.default_rng([1002, i])
        dims = tuple(int(d) for d in rng.integers(2, 5, size=2))
        psi = random_pure_state(dims, rng)
        top = float(np.linalg.svd(psi.amplitudes.reshape(dims), compute_uv=False)[0])
        worst_exact = max(worst_exact, abs(lambda_max(psi).lambda_max - top))
        worst_ascent = max(worst_ascent, abs(lambda_max_ascent(psi).lambda_max - top))
    ok = worst_exact <= 1e-8 and worst_ascent <= 1e-8
    return ok, (
        f"{n} states, max |lambda_max - s1| = {worst_exact:.2e}, "
        f"ascent solver {worst_ascent:.2e} (tol 1e-8)"
    )


def check_multipartite_values(level: str = "full") -> tuple[bool, str]:
    parts, ok = [], True
    for name, psi, exact in (("GHZ3", ghz_state(3), 0.5), ("W3", w_state(3), 4 / 9)):
        solver = lambda_max(psi).lambda_max ** 2
        oracle = brute_lambda_max(psi, samples=10_000, seed=1003) ** 2
        good = abs(solver - oracle) <= 1e-6 and abs(solver - exact) <= 1e-6
        ok &= good
        parts.append(f"{name}: solver {solver:.10f}, oracle {oracle:.10f}")
    return ok, "; ".join(parts) + " (tol 1e-6)"


def check_fidelity_routes(level: str = "full") -> tuple[bool, str]:
    n = _count(level, 200, 40)
    worst_u, worst_p = 0.0, 0.0
    for i in range(n):
        rng = np.random.default_rng([1004, i])
        d = int(rng.integers(2, 5))
        rho = random_density_matrix((d,), rng, rank=int(rng.integers(1, d + 1)))
        sigma = random_density_matrix((d,), rng, rank=int(rng.integers(1, d + 1)))
        worst_u = max(worst_u, abs(uhlmann_fidelity(rho, sigma) - fidelity(rho, sigma)))
        psi = random_pure_state((d,), rng)
        worst_p = max(worst_p, abs(fidelity_pure(psi, sigma) - fidelity(psi, sigma)))
    ok = worst_u <= 1e-6 and worst_p <= 1e-9
    return ok, f"{n} pairs, Uhlmann vs trace {worst_u:.2e} (tol 1e-6), pure vs trace {worst_p:.2e} (tol 1e-9)"


def check_hermitian_bound(level: str = "full") -> tuple[bool, str]:
    n = _count(level, 10_000, 1000)
    rng = np.random.default_rng(1005)
    violations, margin = 0, -np.inf
    for _ in range(n):
        d = int(rng.integers(1, 9))
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = g + g.conj().T
        value, bound = hermitian_overlap_bound(h, random_unit_vector(d, rng), random_unit_vector(d, rng))
        margin = max(margin, value - bound)
        violations += value > bound + 1e-12
    return violations == 0, f"{n} samples, {violations} violations, max(value - bound) = {margin:.2e}"


def check_lagrange_weights(level: str = "full") -> tuple[bool, str]:
    n, trials = _count(level, 100, 20), _count(level, 1000, 200)
    rng = np.random.default_rng(1006)
    worst_gap, worst_identity = -np.inf, 0.0
    for _ in range(n):
        o = rng.uniform(0, 1, size=int(rng.integers(1, 9)))
        best = weighted_overlap(optimal_ancilla_weights(o), o)
        worst_identity = max(worst_identity, abs(best - np.sum(o**2)))
        for w in rng.dirichlet(np.ones(o.size), size=trials):
            worst_gap = max(worst_gap, weighted_overlap(w, o) - best)
    ok = worst_gap <= 1e-12 and worst_identity <= 1e-12
    return ok, (
        f"{n} overlap vectors x {trials} random weights, max random - analytic = {worst_gap:.2e}, "
        f"|analytic - sum o^2| = {worst_identity:.2e}"
    )


def _random_separable(dims, rng, branches: int) -> DensityMatrix:
    products = tuple(ProductState(tuple(random_unit_vector(d, rng) for d in dims)) for _ in range(branches))
    return SeparableEnsemble(rng.dirichlet(np.ones(branches)), products).density()


def check_pure_fsep_bound(level: str = "full") -> tuple[bool, str]:
    n, trials = _count(level, 50, 10), _count(level, 1000, 100)
    worst = -np.inf
    for i in range(n):
        rng = np.random.default_rng([1007, i])
        dims = (2, 2) if i % 2 == 0 else (2, 2, 2)
        psi = random_pure_state(dims, rng)
        f = f_sep_pure(psi)
        for _ in range(trials):
            sigma = _random_separable(dims, rng, int(rng.integers(1, 5)))
            worst = max(worst, fidelity_pure(psi, sigma) - f)
    return worst <= 1e-6, f"{n} states x {trials} separable states, max F(psi, sigma) - F_sep = {worst:.2e} (tol 1e-6)"


def check_report_identities(level: str = "full") -> tuple[bool, str]:
    n = _count(level, 24, 6)
    exact_ok, worst = True, 0.0
    for i in range(n):
        rng = np.random.default_rng([1008, i])
        dims = ((2, 2), (2, 3), (2, 2, 2))[i % 3]
        if i % 2:
            state = random_pure_state(dims, rng)
        else:
            state = random_density_matrix(dims, rng, rank=int(rng.integers(1, 3)))
        rep = entanglement_report(state, RoofOptions(restarts=3))
        exact_ok &= rep.e_ge == rep.e_rge
        worst = max(worst, abs(rep.e_gr**2 + rep.f_sep - 1.0))
    ok = exact_ok and worst <= 1e-12
    return ok, f"{n} reports, e_ge == e_rge: {exact_ok}, max |e_gr^2 + f_sep - 1| = {worst:.2e}"


def _run_cli(argv) -> tuple[int, dict]:
    from .cli import main

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, json.loads(buf.getvalue())


def check_singlet_cli(level: str = "full") -> tuple[bool, str]:
    singlet = bell_state("psi-")
    expected = {"f_sep": 0.5, "e_ge": 0.5, "e_gr": 0.70710678, "e_b": 0.58578644}
    with tempfile.TemporaryDirectory() as tmp:
        pure_path = os.path.join(tmp, "singlet_pure.json")
        mixed_path = os.path.join(tmp, "singlet_mixed.json")
        with open(pure_path, "w", encoding="utf-8") as fh:
            fh.write(dump_state(singlet))
        with open(mixed_path, "w", encoding="utf-8") as fh:
            fh.write(dump_state(singlet.density()))
        code_p, pure = _run_cli(["pure", "--in", pure_path])
        code_m, mixed = _run_cli(["mixed", "--in", mixed_path])
    dev_p = max(abs(pure[k] - v) for k, v in expected.items())
    dev_m = max(abs(mixed[k] - v) for k, v in expected.items())
    ok = code_p == 0 and code_m == 0 and dev_p <= 1e-6 and dev_m <= 1e-3
    return ok, f"pure path max dev {dev_p:.2e} (tol 1e-6), mixed path max dev {dev_m:.2e} (tol 1e-3)"


CHECKS: dict[str, tuple[str, Callable[[str], tuple[bool, str]]]] = {
    "1": ("two-qubit convex roof vs closed form", check_two_qubit_theorem),
    "2": ("bipartite lambda_max vs largest Schmidt coefficient", check_bipartite_schmidt),
    "3": ("GHZ3 / W3 overlap vs brute force", check_multipartite_values),
    "4": ("Uhlmann and pure fidelity vs trace formula", check_fidelity_routes),
    "5": ("Hermitian overlap bound", check_hermitian_bound),
    "6": ("Lagrange ancilla weights are optimal", check_lagrange_weights),
    "7": ("pure F_sep dominates separable mixtures", check_pure_fsep_bound),
    "8": ("report identities e_ge = e_rge, e_gr^2 + f_sep = 1", check_report_identities),
    "9": ("singlet end to end through the CLI", check_singlet_cli),
}


def run_check(key: str, level: str = "full") -> CheckResult:
    title, fn = CHECKS[key]
    start = time.perf_counter()
    passed, detail = fn(level)
    return CheckResult(key, title, bool(passed), detail, time.perf_counter() - start)


def run_all(level: str = "quick") -> list[CheckResult]:
    return [run_check(key, level) for key in CHECKS]
