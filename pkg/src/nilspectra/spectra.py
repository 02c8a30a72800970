"""Cutoff-complete closed-form Dirac spectra.

Generators return every eigenvalue of modulus at most lambda_max together
with its multiplicity and full index provenance.  Index admissibility is a
parity condition, so indices are kept as exact rationals; only the final
eigenvalue arithmetic is floating point.  Coincident eigenvalues produced by
distinct index tuples are stored as separate entries; ``Spectrum.merged``
provides the collapsed view used for comparison and export.

Heisenberg family labels (spin structure (d1, d2, d3), parameters r, d, T):

    A.a    lattice family      -d^2 T/4 +- 2 pi d sqrt(alpha^2 + beta^2)
    A.b    single fiber mode   -d^2 T/4 - 2 pi tau / T,      tau = 1, 2, ...
    A.c+-  paired fiber modes  -d^2 T/4 +- 2 sqrt(pi^2 tau^2/T^2 + k pi d^2 tau)
    B.a / B.b+-                as A.b / A.c+- with tau half-odd (d3 = -1)

The 2-torus family is A.a without the -d^2 T/4 shift; Berger families
(berger.i / .ii / .iii+-) and the complex projective spectrum (cpm+-) follow
their standard closed forms with factorial multiplicities evaluated in exact
integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

HEISENBERG_FAMILIES = ("A.a", "A.b", "A.c+", "A.c-", "B.a", "B.b+", "B.b-")
TORUS_FAMILIES = ("torus+", "torus-")
BERGER_FAMILIES = ("berger.i", "berger.ii", "berger.iii+", "berger.iii-")
CPM_FAMILIES = ("cpm+", "cpm-")


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpinDelta:
    """Spin structure on M(r, d, T) encoded by a sign triple."""

    delta1: int
    delta2: int
    delta3: int

    def __post_init__(self):
        for v in (self.delta1, self.delta2, self.delta3):
            if v not in (-1, 1):
                raise ValueError("spin structure components must be +-1")

    @classmethod
    def from_string(cls, s: str) -> "SpinDelta":
        if len(s) != 3 or any(ch not in "+-" for ch in s):
            raise ValueError(f"spin structure string must be 3 chars of +-, got {s!r}")
        return cls(*(1 if ch == "+" else -1 for ch in s))

    def as_string(self) -> str:
        return "".join("+" if v > 0 else "-" for v in (self.delta1, self.delta2, self.delta3))

    def admissible_for(self, r: int) -> bool:
        return self.delta3 == 1 or r % 2 == 0


@dataclass(frozen=True)
class HeisenbergGeometry:
    r: int
    d: float
    T: float

    def __post_init__(self):
        if not (isinstance(self.r, int) and self.r >= 1):
            raise ValueError("r must be a positive integer")
        if not (self.d > 0 and self.T > 0):
            raise ValueError("d and T must be positive")

    @property
    def shift(self) -> float:
        return self.d * self.d * self.T / 4.0


@dataclass(frozen=True)
class SpectrumEntry:
    value: float
    multiplicity: int
    family: str
    indices: tuple[tuple[str, Fraction], ...]

    def index(self, name: str) -> Fraction:
        for key, val in self.indices:
            if key == name:
                return val
        raise KeyError(name)

    def sort_key(self):
        return (self.value, self.family, self.indices)


@dataclass(frozen=True)
class Spectrum:
    manifold: str
    params: tuple[tuple[str, object], ...]
    lambda_max: float
    entries: tuple[SpectrumEntry, ...]

    def merged(self, tol: float = 1e-9) -> list[tuple[float, int]]:
        """Entries collapsed by value; groups are separated by more than tol."""
        out: list[tuple[float, int]] = []
        for entry in self.entries:
            if out and abs(entry.value - out[-1][0]) <= tol:
                out[-1] = (out[-1][0], out[-1][1] + entry.multiplicity)
            else:
                out.append((entry.value, entry.multiplicity))
        return out

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)


def _entry(value: float, multiplicity, family: str, **indices) -> SpectrumEntry:
    mult = int(multiplicity)
    if mult != multiplicity or mult < 1:
        raise ArithmeticError(f"multiplicity {multiplicity!r} is not a positive integer")
    idx = tuple(sorted((k, Fraction(v)) for k, v in indices.items()))
    return SpectrumEntry(value=float(value), multiplicity=mult, family=family, indices=idx)


def _finish(manifold: str, params: dict, lambda_max: float, entries: list[SpectrumEntry]) -> Spectrum:
    entries.sort(key=SpectrumEntry.sort_key)
    return Spectrum(
        manifold=manifold,
        params=tuple(params.items()),
        lambda_max=float(lambda_max),
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# Closed-form eigenvalue helpers (shared with the collapse reports)
# ---------------------------------------------------------------------------

def lattice_mode_radial(d: float, radius_sq: Fraction) -> float:
    """2 pi d sqrt(alpha^2 + beta^2); the term shared by bundle and base."""
    return 2.0 * math.pi * d * math.sqrt(float(radius_sq))


def lattice_eigenvalue(d: float, T: float, radius_sq: Fraction, sign: int) -> float:
    return sign * lattice_mode_radial(d, radius_sq) - d * d * T / 4.0


def fiber_zero_mode_eigenvalue(tau: Fraction, d: float, T: float) -> float:
    return -d * d * T / 4.0 - 2.0 * math.pi * float(tau) / T


def fiber_pair_eigenvalue(tau: Fraction, k: int, d: float, T: float, sign: int) -> float:
    t = float(tau)
    root = 2.0 * math.sqrt(math.pi ** 2 * t * t / (T * T) + k * math.pi * d * d * t)
    return sign * root - d * d * T / 4.0


# ---------------------------------------------------------------------------
# Admissible index lattices
# ---------------------------------------------------------------------------

def admissible_spin_structures(r: int) -> list[SpinDelta]:
    """All spin structures on M(r, ...): 8 for even r, 4 (delta3 = +1) for odd."""
    if not (isinstance(r, int) and r >= 1):
        raise ValueError("r must be a positive integer")
    third = (1, -1) if r % 2 == 0 else (1,)
    return [
        SpinDelta(d1, d2, d3)
        for d3 in third
        for d1 in (1, -1)
        for d2 in (1, -1)
    ]


def _character_lattice(period: int, sign: int, bound: float) -> list[Fraction]:
    """Rationals x with e^{2 pi i * period * x} = sign and |x| <= bound.

    sign=+1 gives (1/period) Z, sign=-1 the half-integer shifted lattice.
    """
    points: list[Fraction] = []
    if sign == 1:
        top = int(math.floor(bound * period)) + 1
        for p in range(-top, top + 1):
            x = Fraction(p, period)
            if abs(x) <= bound:
                points.append(x)
    else:
        top = int(math.floor(bound * period + 0.5)) + 1
        for p in range(-top, top + 1):
            x = Fraction(2 * p + 1, 2 * period)
            if abs(x) <= bound:
                points.append(x)
    return points


def _half_integers(limit: float) -> Iterable[Fraction]:
    m = 0
    while True:
        tau = Fraction(2 * m + 1, 2)
        if float(tau) > limit:
            return
        yield tau
        m += 1


def _integers(limit: float) -> Iterable[Fraction]:
    tau = 1
    while tau <= limit:
        yield Fraction(tau)
        tau += 1


# ---------------------------------------------------------------------------
# Heisenberg manifolds and their torus base
# ---------------------------------------------------------------------------

def heisenberg_spectrum(
    geom: HeisenbergGeometry,
    delta: SpinDelta,
    lambda_max: float,
    bound_margin: float = 1.0,
) -> Spectrum:
    """Complete Dirac spectrum of M(r, d, T) up to |value| <= lambda_max.

    ``bound_margin`` scales every analytic enumeration bound; the emitted
    set must not depend on it (see the completeness audit).
    """
    if not math.isfinite(lambda_max):
        raise ValueError("lambda_max must be finite")
    if not delta.admissible_for(geom.r):
        raise ValueError(
            f"spin structure {delta.as_string()} requires even r, got r={geom.r}"
        )
    params = {
        "r": geom.r,
        "d": geom.d,
        "T": geom.T,
        "delta": delta.as_string(),
    }
    entries: list[SpectrumEntry] = []
    if lambda_max <= 0:
        return _finish("heisenberg", params, lambda_max, entries)

    d, T, r = geom.d, geom.T, geom.r
    shift = geom.shift

    # every enumeration bound carries a +1 slack so that float rounding at
    # the |value| = lambda_max boundary can never truncate; the |value| filter
    # is the single source of truth
    single_limit = bound_margin * max(0.0, (lambda_max - shift)) * T / (2.0 * math.pi) + 1.0
    pair_limit = bound_margin * (lambda_max + shift) * T / (2.0 * math.pi) + 1.0
    if delta.delta3 == 1:
        # lattice family: multiplicity 1 per admissible (alpha, beta, sign)
        radius_bound = bound_margin * (lambda_max + shift) / (2.0 * math.pi * d) + 1.0
        alphas = _character_lattice(r, delta.delta1, radius_bound)
        betas = _character_lattice(1, delta.delta2, radius_bound)
        for alpha in alphas:
            for beta in betas:
                r2 = alpha * alpha + beta * beta
                for sign in (1, -1):
                    value = lattice_eigenvalue(d, T, r2, sign)
                    if abs(value) <= lambda_max:
                        entries.append(
                            _entry(value, 1, "A.a", alpha=alpha, beta=beta, sign=sign)
                        )
        taus: Iterable[Fraction] = _integers(single_limit)
        single_family, pair_plus, pair_minus = "A.b", "A.c+", "A.c-"
        pair_taus: Iterable[Fraction] = _integers(pair_limit)
    else:
        taus = _half_integers(single_limit)
        single_family, pair_plus, pair_minus = "B.a", "B.b+", "B.b-"
        pair_taus = _half_integers(pair_limit)

    for tau in taus:
        value = fiber_zero_mode_eigenvalue(tau, d, T)
        if abs(value) <= lambda_max:
            entries.append(_entry(value, 2 * tau * r, single_family, tau=tau))

    s_max = lambda_max + shift
    for tau in pair_taus:
        t = float(tau)
        k_cap = (s_max * s_max - 4.0 * math.pi ** 2 * t * t / (T * T)) / (
            4.0 * math.pi * d * d * t
        )
        k_top = int(math.floor(bound_margin * max(0.0, k_cap))) + 1
        for k in range(1, k_top + 1):
            for sign, family in ((1, pair_plus), (-1, pair_minus)):
                value = fiber_pair_eigenvalue(tau, k, d, T, sign)
                if abs(value) <= lambda_max:
                    entries.append(_entry(value, 2 * tau * r, family, tau=tau, k=k))

    return _finish("heisenberg", params, lambda_max, entries)


def torus_spectrum(
    r: int,
    d: float,
    delta: tuple[int, int],
    lambda_max: float,
    bound_margin: float = 1.0,
) -> Spectrum:
    """Dirac spectrum of the flat 2-torus base of M(r, d, T).

    Values are +-2 pi d sqrt(alpha^2 + beta^2) over the same character
    lattices as the Heisenberg lattice family; (0, 0) contributes the value
    0 twice (both sign branches) when both characters are trivial.
    """
    if not (isinstance(r, int) and r >= 1):
        raise ValueError("r must be a positive integer")
    if not (d > 0):
        raise ValueError("d must be positive")
    d1, d2 = delta
    if d1 not in (-1, 1) or d2 not in (-1, 1):
        raise ValueError("delta components must be +-1")
    if not math.isfinite(lambda_max):
        raise ValueError("lambda_max must be finite")
    params = {"r": r, "d": d, "delta": ("+" if d1 > 0 else "-") + ("+" if d2 > 0 else "-")}
    entries: list[SpectrumEntry] = []
    if lambda_max < 0:
        return _finish("torus", params, lambda_max, entries)
    radius_bound = bound_margin * lambda_max / (2.0 * math.pi * d) + 1.0
    for alpha in _character_lattice(r, d1, radius_bound):
        for beta in _character_lattice(1, d2, radius_bound):
            r2 = alpha * alpha + beta * beta
            radial = lattice_mode_radial(d, r2)
            for sign, family in ((1, "torus+"), (-1, "torus-")):
                value = sign * radial if r2 != 0 else 0.0
                if abs(value) <= lambda_max:
                    entries.append(_entry(value, 1, family, alpha=alpha, beta=beta))
    return _finish("torus", params, lambda_max, entries)


# ---------------------------------------------------------------------------
# Berger spheres S^{2m+1} and complex projective spaces
# ---------------------------------------------------------------------------

def _berger_round_value(m: int, ell: float, a: int) -> float:
    return (a + (m + 1) / 2.0) / ell + ell * m / 2.0


def berger_pair_data(m: int, ell: float, a1: int, a2: int, j: int):
    """Bracket, radical and both eigenvalues of the paired Berger family."""
    gap_term = a1 - a2 + Fraction(m - 1, 2) - j
    bracket = 0.5 * ell * (m - 2 * j - 1) + float(gap_term) / ell
    product = 4 * (m - j + a1) * (j + 1 + a2)
    radical = math.sqrt(bracket * bracket + product)
    base = 0.5 * ell if j % 2 == 0 else -0.5 * ell
    return gap_term, bracket, radical, (base + radical, base - radical)


def _berger_pair_multiplicity(m: int, a1: int, a2: int, j: int) -> int:
    num = (
        math.factorial(a1 + m)
        * math.factorial(a2 + m)
        * (a1 + a2 + m + 1)
    )
    den = (
        math.factorial(a1)
        * math.factorial(a2)
        * (a1 + m - j)
        * (a2 + j + 1)
        * math.factorial(m)
        * math.factorial(j)
        * math.factorial(m - j - 1)
    )
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"non-integral multiplicity at (a1, a2, j)=({a1}, {a2}, {j})")
    return q


def berger_spectrum(m: int, ell: float, lambda_max: float, bound_margin: float = 1.0) -> Spectrum:
    """Complete Dirac spectrum of the Berger sphere S^{2m+1} with fiber scale ell."""
    if not (isinstance(m, int) and m >= 1):
        raise ValueError("m must be a positive integer")
    if not (ell > 0):
        raise ValueError("fiber scale ell must be positive")
    if not math.isfinite(lambda_max):
        raise ValueError("lambda_max must be finite")
    params = {"m": m, "ell": ell}
    entries: list[SpectrumEntry] = []
    if lambda_max <= 0:
        return _finish("berger", params, lambda_max, entries)

    # round families: |value| increases in a
    a_cap = ell * (lambda_max - ell * m / 2.0) - (m + 1) / 2.0
    a_top = int(math.floor(bound_margin * max(0.0, a_cap))) + 1
    sign_ii = 1 if (m + 1) % 2 == 0 else -1
    for a in range(a_top + 1):
        value = _berger_round_value(m, ell, a)
        mult = math.comb(m + a, a)
        if abs(value) <= lambda_max:
            entries.append(_entry(value, mult, "berger.i", a=a))
        value_ii = sign_ii * value
        if abs(value_ii) <= lambda_max:
            entries.append(_entry(value_ii, mult, "berger.ii", a=a))

    # paired family: |value| >= 2 sqrt((m-j+a1)(j+1+a2)) - ell/2 bounds a1, a2
    half_width = (lambda_max + 0.5 * ell) / 2.0
    prod_cap = half_width * half_width
    pair_top = int(math.floor(bound_margin * max(0.0, prod_cap))) + 1
    for j in range(m):
        for a1 in range(pair_top + 1):
            for a2 in range(pair_top + 1):
                _, _, _, (v_plus, v_minus) = berger_pair_data(m, ell, a1, a2, j)
                keep_plus = abs(v_plus) <= lambda_max
                keep_minus = abs(v_minus) <= lambda_max
                if not (keep_plus or keep_minus):
                    continue
                mult = _berger_pair_multiplicity(m, a1, a2, j)
                if keep_plus:
                    entries.append(_entry(v_plus, mult, "berger.iii+", a1=a1, a2=a2, j=j))
                if keep_minus:
                    entries.append(_entry(v_minus, mult, "berger.iii-", a1=a1, a2=a2, j=j))

    return _finish("berger", params, lambda_max, entries)


def cpm_eigenvalue(m: int, a1: int, a2: int, sign: int) -> float:
    half = (m + 1) // 2
    return sign * 2.0 * math.sqrt((a1 + half) * (a2 + half))


def _cpm_multiplicity(m: int, a1: int, a2: int) -> int:
    half = (m + 1) // 2
    spread = (m - 1) // 2
    num = math.factorial(a1 + m) * math.factorial(a2 + m) * (a1 + a2 + m + 1)
    den = (
        math.factorial(a1)
        * math.factorial(a2)
        * (a1 + half)
        * (a2 + half)
        * math.factorial(m)
        * math.factorial(a1 - a2 + spread)
        * math.factorial(a2 - a1 + spread)
    )
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"non-integral multiplicity at (a1, a2)=({a1}, {a2})")
    return q


def cpm_spectrum(m: int, lambda_max: float, bound_margin: float = 1.0) -> Spectrum:
    """Complete Dirac spectrum of CP^m; m must be odd (otherwise not spin)."""
    if not (isinstance(m, int) and m >= 1):
        raise ValueError("m must be a positive integer")
    if m % 2 == 0:
        raise ValueError(f"CP^{m} carries no spin structure (m must be odd)")
    if not math.isfinite(lambda_max):
        raise ValueError("lambda_max must be finite")
    params = {"m": m}
    entries: list[SpectrumEntry] = []
    if lambda_max <= 0:
        return _finish("cpm", params, lambda_max, entries)
    half = (m + 1) // 2
    spread = (m - 1) // 2
    a_cap = (lambda_max / 2.0) ** 2 / half - half
    a_top = int(math.floor(bound_margin * max(0.0, a_cap))) + 1
    for a1 in range(a_top + 1):
        for a2 in range(a_top + 1):
            if abs(a1 - a2) > spread:
                continue
            value = cpm_eigenvalue(m, a1, a2, 1)
            if value > lambda_max:
                continue
            mult = _cpm_multiplicity(m, a1, a2)
            entries.append(_entry(value, mult, "cpm+", a1=a1, a2=a2))
            entries.append(_entry(-value, mult, "cpm-", a1=a1, a2=a2))
    return _finish("cpm", params, lambda_max, entries)


# ---------------------------------------------------------------------------
# Comparison, representation multiplicity, harmonic-spinor tuning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumDiff:
    matched: tuple[tuple[float, int, float, int], ...]
    only_first: tuple[tuple[float, int], ...]
    only_second: tuple[tuple[float, int], ...]

    @property
    def multiplicity_mismatches(self) -> tuple[tuple[float, int, float, int], ...]:
        return tuple(row for row in self.matched if row[1] != row[3])

    @property
    def equal(self) -> bool:
        return not self.only_first and not self.only_second and not self.multiplicity_mismatches


def spectrum_compare(s1: Spectrum, s2: Spectrum, tol: float) -> SpectrumDiff:
    """Greedy value-matching of two spectra truncated at the same cutoff."""
    if s1.lambda_max != s2.lambda_max:
        raise ValueError("spectra must be truncated at the same lambda_max")
    m1 = s1.merged(tol)
    m2 = s2.merged(tol)
    matched = []
    only1 = []
    only2 = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, n1 = m1[i]
        v2, n2 = m2[j]
        if abs(v1 - v2) <= tol:
            matched.append((v1, n1, v2, n2))
            i += 1
            j += 1
        elif v1 < v2:
            only1.append(m1[i])
            i += 1
        else:
            only2.append(m2[j])
            j += 1
    only1.extend(m1[i:])
    only2.extend(m2[j:])
    return SpectrumDiff(tuple(matched), tuple(only1), tuple(only2))


def heisenberg_rep_multiplicity(tau, r: int) -> int:
    """Multiplicity |tau| r of the fiber representation; spinors carry 2 |tau| r.

    tau must be a nonzero half-integer; half-odd tau requires even r for the
    count to be integral (that is exactly the admissible case).
    """
    tau = Fraction(tau)
    if tau == 0:
        raise ValueError("tau = 0 lies outside the fiber decomposition")
    if (2 * tau).denominator != 1:
        raise ValueError("tau must be a half-integer")
    if not (isinstance(r, int) and r >= 1):
        raise ValueError("r must be a positive integer")
    count = abs(tau) * r
    if count.denominator != 1:
        raise ValueError("half-odd tau requires even r (inadmissible combination)")
    return int(count)


def harmonic_spinor_metric(tau, k: int, d: float) -> float:
    """The unique fiber length T at which the +branch pair eigenvalue vanishes.

    Solving -d^2 T / 4 + 2 sqrt(pi^2 tau^2 / T^2 + k pi d^2 tau) = 0 for
    T^2 gives T^2 = (pi tau / d^2)(32 k + 8 sqrt(16 k^2 + 1)).
    """
    tau = Fraction(tau)
    if tau <= 0 or (2 * tau).denominator != 1:
        raise ValueError("tau must be a positive half-integer")
    if not (isinstance(k, int) and k >= 1):
        raise ValueError("k must be a positive integer (the paired family needs k >= 1)")
    if not (d > 0):
        raise ValueError("d must be positive")
    t_sq = (math.pi * float(tau) / (d * d)) * (32.0 * k + 8.0 * math.sqrt(16.0 * k * k + 1.0))
    T = math.sqrt(t_sq)
    residual = fiber_pair_eigenvalue(tau, k, d, T, 1)
    if abs(residual) > 1e-12:
        raise ArithmeticError(f"zero-mode tuning residual {residual} exceeds 1e-12")
    return T
