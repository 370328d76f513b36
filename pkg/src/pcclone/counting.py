"""Coincidence-count simulation and fidelity estimation.

Each trial offers one photon pair to the cloner.  With probability P_succ the
post-selection succeeds, the two clones are analyzed in the basis spanned by
the analysis state and its orthogonal complement, and the resulting detector
pattern (one of ++, +-, -+, --) is registered with probability equal to the
product of the two involved detector efficiencies.  Detectors are binary and
dark-count free, so a trial either contributes one coincidence or nothing.

Counts are sampled with a seeded generator and are reproducible; records
merge by field-wise addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .cloners import (
    CloneReport,
    ClonerParams,
    FiberParams,
    MachZehnderParams,
)
from .fock import Qubit
from .noise import (
    NoiseConfig,
    conditional_sector_vectors,
    evaluate,
    sample_phase_jitter,
)

_PATTERNS = ("pp", "pm", "mp", "mm")
_CHUNK = 1 << 16


@dataclass(frozen=True)
class DetectorBank:
    """Detection efficiencies of D1+, D1-, D2+, D2-."""

    eta_1p: float = 1.0
    eta_1m: float = 1.0
    eta_2p: float = 1.0
    eta_2m: float = 1.0

    def __post_init__(self):
        for name in ("eta_1p", "eta_1m", "eta_2p", "eta_2m"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def pattern_efficiencies(self) -> np.ndarray:
        """Registration probability per pattern, order (++, +-, -+, --)."""
        return np.array(
            [
                self.eta_1p * self.eta_2p,
                self.eta_1p * self.eta_2m,
                self.eta_1m * self.eta_2p,
                self.eta_1m * self.eta_2m,
            ]
        )

    @classmethod
    def uniform(cls, eta: float) -> "DetectorBank":
        return cls(eta, eta, eta, eta)


@dataclass(frozen=True)
class CoincidenceRecord:
    """Raw coincidence counts C++, C+-, C-+, C-- plus trial metadata."""

    c_pp: int
    c_pm: int
    c_mp: int
    c_mm: int
    n_pairs: int
    seed: int

    def __post_init__(self):
        for name in ("c_pp", "c_pm", "c_mp", "c_mm"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.n_pairs < 1:
            raise ValueError(f"n_pairs must be >= 1, got {self.n_pairs}")
        if self.c_sum > self.n_pairs:
            raise ValueError("total coincidences cannot exceed n_pairs")

    @property
    def c_sum(self) -> int:
        return self.c_pp + self.c_pm + self.c_mp + self.c_mm

    def counts(self) -> np.ndarray:
        return np.array([self.c_pp, self.c_pm, self.c_mp, self.c_mm])

    def merged(self, other: "CoincidenceRecord") -> "CoincidenceRecord":
        """Field-wise sum; associative and commutative for partitioned runs."""
        return CoincidenceRecord(
            self.c_pp + other.c_pp,
            self.c_pm + other.c_pm,
            self.c_mp + other.c_mp,
            self.c_mm + other.c_mm,
            self.n_pairs + other.n_pairs,
            min(self.seed, other.seed),
        )


@dataclass(frozen=True)
class CountingSetup:
    """Everything needed to (re)simulate one counting run."""

    model: ClonerParams
    noise: NoiseConfig
    input: Qubit
    n_pairs: int
    seed: int
    analysis: Union[Qubit, tuple, None] = None


def _standard_basis(analysis: Qubit):
    return analysis.amplitudes(), analysis.orthogonal().amplitudes()


def _ratio_basis(phi: float, ratio: float):
    """Click basis of a detection block: coupler ratio + phase modulator."""
    a = math.sqrt(ratio)
    b = math.sqrt(1.0 - ratio)
    phase = np.exp(1j * phi)
    plus = np.array([a, b * phase], dtype=complex)
    minus = np.array([b, -a * phase], dtype=complex)
    return plus, minus


def _side_bases(model: ClonerParams, input: Qubit, analysis):
    """Per-clone analyzer bases honoring fiber detection-block settings."""
    if analysis is None:
        if isinstance(model, FiberParams):
            phases = model.analysis_phases
            if phases is None:
                phases = (input.phi, input.phi)
            return (
                _ratio_basis(phases[0], model.detection_ratio_1),
                _ratio_basis(phases[1], model.detection_ratio_2),
            )
        basis = _standard_basis(input)
        return basis, basis
    if isinstance(analysis, Qubit):
        basis = _standard_basis(analysis)
        return basis, basis
    side1, side2 = analysis
    return _standard_basis(side1), _standard_basis(side2)


def _pattern_vectors(side1, side2) -> np.ndarray:
    """Rows: two-clone projection vectors in pattern order (++, +-, -+, --)."""
    (p1, m1), (p2, m2) = side1, side2
    return np.stack(
        [np.kron(p1, p2), np.kron(p1, m2), np.kron(m1, p2), np.kron(m1, m2)]
    )


def outcome_distribution(report: CloneReport, analysis: Qubit,
                         analysis_2: Qubit | None = None) -> np.ndarray:
    """Detector-pattern probabilities conditioned on post-selection success.

    Order: (p_pp, p_pm, p_mp, p_mm); each clone is projected onto the
    analysis state / its orthogonal complement.
    """
    if report.is_empty:
        raise ValueError("cannot analyze an empty report")
    side1 = _standard_basis(analysis)
    side2 = _standard_basis(analysis_2) if analysis_2 is not None else side1
    w = _pattern_vectors(side1, side2)
    probs = np.einsum("ai,ij,aj->a", w.conj(), report.joint.rho, w).real
    return np.clip(probs, 0.0, None)


def _registration_probabilities(model, noise, input, analysis,
                                detectors) -> np.ndarray:
    """Per-pattern registration probabilities for a static (no-jitter) run."""
    report = evaluate(model, noise, input)
    if report.is_empty:
        return np.zeros(4)
    w = _pattern_vectors(*_side_bases(model, input, analysis))
    probs = np.einsum("ai,ij,aj->a", w.conj(), report.joint.rho, w).real
    probs = np.clip(probs, 0.0, None)
    return report.P_succ * probs * detectors.pattern_efficiencies()


def simulate_counts(
    model: ClonerParams,
    noise: NoiseConfig,
    input: Qubit,
    n_pairs: int,
    detectors: DetectorBank,
    seed: int,
    analysis: Union[Qubit, tuple, None] = None,
) -> CoincidenceRecord:
    """Simulate ``n_pairs`` photon-pair trials and tally coincidences."""
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be >= 1, got {n_pairs}")
    jitter_active = noise.phase_jitter_sigma > 0.0 and isinstance(
        model, (MachZehnderParams, FiberParams)
    )
    if not jitter_active:
        reg = _registration_probabilities(model, noise, input, analysis, detectors)
        rest = max(0.0, 1.0 - float(reg.sum()))
        pvals = np.append(reg, rest)
        pvals = pvals / pvals.sum()
        rng = np.random.default_rng(seed)
        counts = rng.multinomial(n_pairs, pvals)[:4]
        return CoincidenceRecord(*(int(c) for c in counts), n_pairs, seed)

    seq_jitter, seq_outcome = np.random.SeedSequence(seed).spawn(2)
    phases = sample_phase_jitter(noise, seq_jitter, n_pairs)
    rng = np.random.default_rng(seq_outcome)
    w = _pattern_vectors(*_side_bases(model, input, analysis))
    eff = detectors.pattern_efficiencies()
    counts = np.zeros(4, dtype=np.int64)
    for start in range(0, n_pairs, _CHUNK):
        chunk = phases[start:start + _CHUNK]
        vectors = conditional_sector_vectors(model, input, noise.overlap_M, chunk)
        amp = np.einsum("tsi,ai->tsa", vectors, w.conj())
        probs = np.einsum("tsa,tsa->ta", amp, amp.conj()).real
        reg = np.cumsum(probs * eff, axis=1)
        u = rng.random(chunk.shape[0])
        registered = u < reg[:, -1]
        pattern = np.argmax(u[:, None] < reg, axis=1)
        counts += np.bincount(pattern[registered], minlength=4)
    return CoincidenceRecord(*(int(c) for c in counts), n_pairs, seed)


def fidelity_from_rates(c_pp, c_pm, c_mp, c_mm):
    """Estimator F1 = (C++ + C+-)/C_sum, F2 = (C++ + C-+)/C_sum.

    Accepts real-valued rates (e.g. efficiency-rescaled counts); returns
    ``None`` when there is no data.
    """
    total = c_pp + c_pm + c_mp + c_mm
    if total <= 0:
        return None
    return (c_pp + c_pm) / total, (c_pp + c_mp) / total


def fidelity_from_counts(record: CoincidenceRecord):
    """Clone-fidelity estimates from a coincidence record (None if empty)."""
    return fidelity_from_rates(record.c_pp, record.c_pm, record.c_mp, record.c_mm)


def success_probability_estimate(record: CoincidenceRecord) -> float:
    """Fraction of offered pairs that produced a registered coincidence."""
    return record.c_sum / record.n_pairs


def estimator_sigma(f_hat: float, c_sum: int) -> float:
    """Binomial standard error of a fidelity estimate."""
    if c_sum <= 0:
        raise ValueError("need at least one coincidence")
    return math.sqrt(max(f_hat * (1.0 - f_hat), 0.0) / c_sum)


def balance_detectors(method: str, record_or_setup, detectors: DetectorBank):
    """Remove detector-efficiency bias from the fidelity estimates.

    ``rescale``    -- divide each count by its efficiency product
                      (takes a CoincidenceRecord);
    ``add_loss``   -- attenuate every detector to the worst efficiency and
                      re-simulate (takes a CountingSetup);
    ``basis_swap`` -- measure the four patterns sequentially with the single
                      (D1+, D2+) pair, cycling the analyzer settings, so the
                      efficiency product cancels (takes a CountingSetup).

    Returns unbiased ``(F1, F2)``.
    """
    if method not in ("rescale", "add_loss", "basis_swap"):
        raise ValueError(
            f"method must be 'rescale', 'add_loss' or 'basis_swap', got {method!r}"
        )
    if method == "rescale":
        if not isinstance(record_or_setup, CoincidenceRecord):
            raise TypeError("rescale requires a CoincidenceRecord")
        eff = detectors.pattern_efficiencies()
        if np.any(eff <= 0.0):
            raise ValueError("rescale requires strictly positive efficiencies")
        rates = record_or_setup.counts() / eff
        return fidelity_from_rates(*rates)

    if not isinstance(record_or_setup, CountingSetup):
        raise TypeError(f"{method} requires a CountingSetup")
    setup = record_or_setup

    if method == "add_loss":
        eta_min = min(
            detectors.eta_1p, detectors.eta_1m, detectors.eta_2p, detectors.eta_2m
        )
        if eta_min <= 0.0:
            raise ValueError("add_loss requires strictly positive efficiencies")
        balanced = DetectorBank.uniform(eta_min)
        record = simulate_counts(
            setup.model, setup.noise, setup.input, setup.n_pairs,
            balanced, setup.seed, setup.analysis,
        )
        return fidelity_from_counts(record)

    if method == "basis_swap":
        if setup.n_pairs < 4:
            raise ValueError("basis_swap needs at least 4 trials")
        analysis = setup.analysis if isinstance(setup.analysis, Qubit) else setup.input
        orth = analysis.orthogonal()
        settings = (
            (analysis, analysis),
            (analysis, orth),
            (orth, analysis),
            (orth, orth),
        )
        n_each = setup.n_pairs // 4
        seeds = np.random.SeedSequence(setup.seed).generate_state(4)
        counts = []
        for setting, child in zip(settings, seeds):
            record = simulate_counts(
                setup.model, setup.noise, setup.input, n_each,
                detectors, int(child), analysis=setting,
            )
            counts.append(record.c_pp)
        return fidelity_from_rates(*counts)
    raise AssertionError("unreachable")
