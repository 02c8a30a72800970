"""Classification of spectra under fiber collapse.

For a shrinking fiber every spectrum entry either converges to a base
eigenvalue or diverges like k / ell for a nonzero (half-)integer k.  The
reports classify every entry below the cutoff exactly once per parameter
value, pair converging entries with base entries by exact index provenance,
and tabulate scaled values ell * lambda with their limits.

For the Heisenberg manifold the fiber has length T, so the scale parameter
is ell = T / (2 pi); reports carry both.  The bundle-to-base gap of a
lattice-family entry is the metric shift d^2 T / 4 itself, since bundle and
base values share the identical radial term; the reported analytic gap is
that shift, with the observed float difference kept alongside as a guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .spectra import (
    HeisenbergGeometry,
    Spectrum,
    SpectrumEntry,
    SpinDelta,
    berger_pair_data,
    berger_spectrum,
    cpm_eigenvalue,
    cpm_spectrum,
    heisenberg_spectrum,
    torus_spectrum,
)

#: observed bundle-base gaps may differ from the analytic shift only by
#: float noise; the pairing check brackets them generously
GAP_BRACKET_FACTOR = 10.0


@dataclass(frozen=True)
class MatchedPair:
    bundle: SpectrumEntry
    base: SpectrumEntry
    gap_analytic: float | None
    gap_observed: float


@dataclass(frozen=True)
class DivergentEntry:
    entry: SpectrumEntry
    scaled: float
    limit: float
    residual_limit: float
    nearest: float
    residual_nearest: float


@dataclass(frozen=True)
class CollapseSlice:
    parameter: float
    ell: float
    matched: tuple[MatchedPair, ...]
    divergent: tuple[DivergentEntry, ...]
    entry_count: int

    @property
    def all_classified(self) -> bool:
        return len(self.matched) + len(self.divergent) == self.entry_count


@dataclass(frozen=True)
class CollapseReport:
    manifold: str
    parameter_name: str
    projectable: bool
    half_integer_limits: bool
    slices: tuple[CollapseSlice, ...]


def nearest_integer(x: float) -> float:
    return math.floor(x + 0.5)


def nearest_half_integer(x: float) -> float:
    return math.floor(x) + 0.5


def _divergent(entry: SpectrumEntry, ell: float, limit: float, half: bool) -> DivergentEntry:
    scaled = ell * entry.value
    nearest = nearest_half_integer(scaled) if half else nearest_integer(scaled)
    return DivergentEntry(
        entry=entry,
        scaled=scaled,
        limit=limit,
        residual_limit=abs(scaled - limit),
        nearest=nearest,
        residual_nearest=abs(scaled - nearest),
    )


def _check_sequence(values) -> list[float]:
    seq = [float(v) for v in values]
    if not seq or any(v <= 0 for v in seq):
        raise ValueError("parameter sequence must be positive")
    if any(b >= a for a, b in zip(seq, seq[1:])):
        raise ValueError("parameter sequence must be strictly decreasing")
    return seq


def heisenberg_collapse_report(
    r: int,
    d: float,
    delta: SpinDelta,
    T_sequence,
    lambda_max: float,
) -> CollapseReport:
    """Collapse behavior of M(r, d, T) along a decreasing sequence of T.

    delta3 = +1: every lattice-family entry is matched, by its exact
    (alpha, beta, sign) indices, to a base 2-torus entry; the remaining
    families diverge with ell * lambda near the integer -+tau.
    delta3 = -1: everything diverges, with limits in the half-integers.
    """
    seq = _check_sequence(T_sequence)
    delta_obj = delta if isinstance(delta, SpinDelta) else SpinDelta(*delta)
    projectable = delta_obj.delta3 == 1
    slices = []
    for T in seq:
        geom = HeisenbergGeometry(r=r, d=d, T=T)
        spec = heisenberg_spectrum(geom, delta_obj, lambda_max)
        ell = T / (2.0 * math.pi)
        shift = geom.shift
        matched: list[MatchedPair] = []
        divergent: list[DivergentEntry] = []
        base_index: dict[tuple, SpectrumEntry] = {}
        if projectable:
            base = torus_spectrum(
                r, d, (delta_obj.delta1, delta_obj.delta2), lambda_max + shift
            )
            for b in base.entries:
                sign = 1 if b.family == "torus+" else -1
                base_index[(b.index("alpha"), b.index("beta"), sign)] = b
        for entry in spec.entries:
            family = entry.family
            if family == "A.a":
                key = (entry.index("alpha"), entry.index("beta"), int(entry.index("sign")))
                partner = base_index.get(key)
                if partner is None:
                    raise ArithmeticError(f"no base partner for lattice entry {key}")
                observed = abs(entry.value - partner.value)
                if observed > GAP_BRACKET_FACTOR * shift + 1e-12:
                    raise ArithmeticError(
                        f"bundle-base gap {observed} outside bracket at {key}"
                    )
                matched.append(
                    MatchedPair(
                        bundle=entry,
                        base=partner,
                        gap_analytic=d * d * T / 4.0,
                        gap_observed=observed,
                    )
                )
            else:
                tau = entry.index("tau")
                if family in ("A.b", "B.a"):
                    limit = -float(tau)
                else:
                    limit = float(tau) if family.endswith("+") else -float(tau)
                divergent.append(_divergent(entry, ell, limit, half=not projectable))
        slices.append(
            CollapseSlice(
                parameter=T,
                ell=ell,
                matched=tuple(matched),
                divergent=tuple(divergent),
                entry_count=len(spec.entries),
            )
        )
    return CollapseReport(
        manifold="heisenberg",
        parameter_name="T",
        projectable=projectable,
        half_integer_limits=not projectable,
        slices=tuple(slices),
    )


def berger_collapse_report(m: int, ell_sequence, lambda_max: float) -> CollapseReport:
    """Collapse of the Berger sphere S^{2m+1} along the Hopf fibration.

    For odd m the paired-family entries whose indices satisfy
    j = a1 - a2 + (m-1)/2 converge to projective-space eigenvalues; the gap
    is exactly ell/2 when the bracket term vanishes (a1 = a2) and
    ell/2 + O(ell^2) otherwise.  Everything else diverges; for even m the
    projective base is not spin and every entry diverges with half-integer
    scaled limits.
    """
    if not (isinstance(m, int) and m >= 1):
        raise ValueError("m must be a positive integer")
    seq = _check_sequence(ell_sequence)
    projectable = m % 2 == 1
    spread = Fraction(m - 1, 2)
    slices = []
    for ell in seq:
        spec = berger_spectrum(m, ell, lambda_max)
        matched: list[MatchedPair] = []
        divergent: list[DivergentEntry] = []
        base_index: dict[tuple, SpectrumEntry] = {}
        if projectable:
            base_cut = lambda_max + 0.5 * ell + (0.5 * ell * m) ** 2 + 1.0
            base = cpm_spectrum(m, base_cut)
            for b in base.entries:
                sign = 1 if b.family == "cpm+" else -1
                base_index[(b.index("a1"), b.index("a2"), sign)] = b
        for entry in spec.entries:
            family = entry.family
            if family in ("berger.i", "berger.ii"):
                a = int(entry.index("a"))
                magnitude = a + (m + 1) / 2.0
                limit = magnitude if family == "berger.i" else ((-1) ** (m + 1)) * magnitude
                divergent.append(_divergent(entry, ell, limit, half=not projectable))
                continue
            a1 = int(entry.index("a1"))
            a2 = int(entry.index("a2"))
            j = int(entry.index("j"))
            sign = 1 if family.endswith("+") else -1
            gap_term = a1 - a2 + spread - j
            if projectable and gap_term == 0:
                partner = base_index.get((Fraction(a1), Fraction(a2), sign))
                if partner is None:
                    raise ArithmeticError(f"no base partner at (a1, a2)=({a1}, {a2})")
                limit = cpm_eigenvalue(m, a1, a2, sign)
                _, bracket, _, _ = berger_pair_data(m, ell, a1, a2, j)
                gap_analytic = 0.5 * ell if bracket == 0.0 else None
                matched.append(
                    MatchedPair(
                        bundle=entry,
                        base=partner,
                        gap_analytic=gap_analytic,
                        gap_observed=abs(entry.value - limit),
                    )
                )
            else:
                limit = sign * abs(float(gap_term))
                divergent.append(_divergent(entry, ell, limit, half=not projectable))
        slices.append(
            CollapseSlice(
                parameter=ell,
                ell=ell,
                matched=tuple(matched),
                divergent=tuple(divergent),
                entry_count=len(spec.entries),
            )
        )
    return CollapseReport(
        manifold="berger",
        parameter_name="ell",
        projectable=projectable,
        half_integer_limits=not projectable,
        slices=tuple(slices),
    )


@dataclass(frozen=True)
class ScaledLimitRow:
    ell: float
    scaled: float
    nearest: float
    residual: float


def scaled_limit_check(value_of_ell, ells, half_integer_limits: bool = False) -> list[ScaledLimitRow]:
    """Tabulate ell * lambda(ell) with its nearest (half-)integer."""
    rows = []
    for ell in ells:
        lam = float(value_of_ell(ell))
        scaled = ell * lam
        nearest = nearest_half_integer(scaled) if half_integer_limits else nearest_integer(scaled)
        rows.append(ScaledLimitRow(ell=ell, scaled=scaled, nearest=nearest, residual=abs(scaled - nearest)))
    return rows
