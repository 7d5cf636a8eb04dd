"""
Seeded, optionally parallel driver for the verification suites.

Trial i of a suite draws all its randomness from SeedSequence([seed, salt, i]), and
results are merged by trial index, so serial and parallel runs give identical reports.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional

import numpy as np

from harness.generators import (
    critical_hamiltonian_matrix,
    gen_hamiltonian_digraph,
    gen_irreducible,
    gen_low_rank,
    gen_reducible,
    gen_walk,
)
from harness.models import GenSpec, SuiteResult, ViolationReport
from harness.suites import (
    check_boolean_classics,
    check_lemmas,
    check_main1,
    check_main2,
    check_power_identity,
    check_pumping,
)

logger = logging.getLogger(__name__)

SUITES = ("main1", "main2", "lemmas", "boolean-classics", "pumping")
DEFAULT_NMAX = {"main1": 8, "main2": 8, "lemmas": 7, "boolean-classics": 4, "pumping": 8}
DEFAULT_TRIALS = {"main1": 500, "main2": 200, "lemmas": 300, "boolean-classics": 0, "pumping": 1000}
SUITE_SALT = {name: index + 1 for index, name in enumerate(SUITES)}
POWER_IDENTITY_TRIALS = 50
POWER_IDENTITY_NMAX = 6


def trial_rng(seed: int, suite: str, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, SUITE_SALT[suite], trial]))


def _spec_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2**63))


def _trial_main1(rng: np.random.Generator, trial: int, nmax: int) -> List[ViolationReport]:
    n = int(rng.integers(1, nmax + 1))
    density = float(rng.uniform(0.2, 0.7))
    seed = _spec_seed(rng)
    if trial % 5 == 4:
        A = gen_irreducible(GenSpec(n=n, density=density, structure="boolean", seed=seed))
    elif trial % 7 == 6 and n >= 2:
        A = gen_reducible(GenSpec(n=n, density=density, seed=seed))
    elif trial % 11 == 10 and n >= 2:
        A = gen_irreducible(GenSpec(n=n, structure="planted", planted=[n, n - 1], seed=seed))
    else:
        A = gen_irreducible(GenSpec(n=n, density=density, seed=seed))
    return check_main1(A)


def _trial_main2(rng: np.random.Generator, trial: int, nmax: int) -> List[ViolationReport]:
    n = int(rng.integers(2, max(nmax, 2) + 1))
    r = int(rng.integers(1, n // 2 + 1))
    spec = GenSpec(n=n, density=float(rng.uniform(0.3, 0.8)), structure="low-rank", rank=r, seed=_spec_seed(rng))
    A, F = gen_low_rank(spec)
    return check_main2(A, F)


def _trial_lemmas(rng: np.random.Generator, trial: int, nmax: int) -> List[ViolationReport]:
    n = int(rng.integers(1, nmax + 1))
    spec = GenSpec(n=n, density=float(rng.uniform(0.2, 0.7)), seed=_spec_seed(rng))
    return check_lemmas(gen_irreducible(spec))


def _trial_pumping(rng: np.random.Generator, trial: int, nmax: int) -> List[ViolationReport]:
    n = int(rng.integers(1, nmax + 1))
    D, hamiltonian = gen_hamiltonian_digraph(rng, n, float(rng.uniform(0.0, 0.5)))
    W = gen_walk(rng, D, int(rng.integers(0, 3 * n * n + 1)))
    A = critical_hamiltonian_matrix(rng, D, hamiltonian, GenSpec(n=n).palette())
    violations = check_pumping(D, hamiltonian, W, A)
    if trial < POWER_IDENTITY_TRIALS:
        m = min(n, POWER_IDENTITY_NMAX)
        D_small, cycle = gen_hamiltonian_digraph(rng, m, float(rng.uniform(0.0, 0.6)))
        violations += check_power_identity(critical_hamiltonian_matrix(rng, D_small, cycle, GenSpec(n=m).palette()))
    return violations


TRIALS: Dict[str, Callable] = {
    "main1": _trial_main1,
    "main2": _trial_main2,
    "lemmas": _trial_lemmas,
    "pumping": _trial_pumping,
}


def run_trial(suite: str, seed: int, trial: int, nmax: int) -> List[ViolationReport]:
    """One trial of a randomized suite. Module-level so worker processes can pickle it."""
    rng = trial_rng(seed, suite, trial)
    violations = TRIALS[suite](rng, trial, nmax)
    logger.debug("%s trial %d: %d violation(s)", suite, trial, len(violations))
    return violations


def run_suite(suite: str, trials: int, seed: int, nmax: Optional[int] = None, threads: int = 1) -> SuiteResult:
    """
    Run a suite and collect its violations.

    Args:
        suite: One of SUITES
        trials: Random instances (for boolean-classics: random digraphs per size above 4)
        seed: Base seed
        nmax: Largest instance size; suite default when None
        threads: Worker processes; 1 runs in-process

    Raises:
        ValueError: if the suite name is unknown
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if trials < 0:
        raise ValueError("trials must be non-negative")
    nmax = nmax or DEFAULT_NMAX[suite]
    result = SuiteResult(suite=suite, trials=trials, seed=seed, nmax=nmax)

    if suite == "boolean-classics":
        stats: Dict[str, int] = {}
        result.violations = check_boolean_classics(nmax, samples=trials, seed=seed, stats=stats)
        result.instances_checked = stats["digraphs"]
    elif threads <= 1 or trials <= 1:
        for trial in range(trials):
            result.violations.extend(run_trial(suite, seed, trial, nmax))
        result.instances_checked = trials
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run_trial, suite, seed, trial, nmax) for trial in range(trials)]
            for future in futures:
                result.violations.extend(future.result())
        result.instances_checked = trials

    logger.info("suite %s: %d trial(s), %d violation(s)", suite, trials, len(result.violations))
    return result
