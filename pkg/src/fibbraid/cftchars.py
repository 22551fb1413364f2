"""Truncated q-series for the u(1) and parafermion characters.

A :class:`QSeries` maps ``(q exponent, y exponent)`` pairs of exact rationals to
integer coefficients and remembers the absolute cutoff below which it is
complete.  The Dedekind eta and Cappelli-Zemba prefactors of the u(1) part are
left out so that coefficients stay integral; :func:`eta_series` provides the
former when needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .fusion import Label

CARTAN_INV = ((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3)))
LAMBDA = {0: (0, 0), 1: (1, 0), 2: (0, 1)}


@dataclass(frozen=True)
class QSeries:
    """Finite part of ``sum c * q^a * y^b`` that is exact for ``a < cutoff``."""

    terms: tuple  # sorted ((a, b, c), ...)
    cutoff: Fraction

    @classmethod
    def from_dict(cls, coeffs: dict, cutoff) -> "QSeries":
        cutoff = Fraction(cutoff)
        items = sorted((Fraction(a), Fraction(b), int(c)) for (a, b), c in coeffs.items()
                       if c and Fraction(a) < cutoff)
        return cls(tuple(items), cutoff)

    def as_dict(self) -> dict:
        return {(a, b): c for a, b, c in self.terms}

    @property
    def leading_exponent(self) -> Fraction | None:
        return self.terms[0][0] if self.terms else None

    def coefficient(self, a, b=None) -> int:
        a = Fraction(a)
        if b is None:
            return sum(c for x, _, c in self.terms if x == a)
        return self.as_dict().get((a, Fraction(b)), 0)

    def at_y1(self) -> "QSeries":
        """Collapse the charge variable (set ``y = 1``)."""
        out: dict = {}
        for a, _, c in self.terms:
            out[(a, 0)] = out.get((a, 0), 0) + c
        return QSeries.from_dict(out, self.cutoff)

    def scale_y(self, factor: int) -> "QSeries":
        """Substitute ``y -> y**factor``."""
        return QSeries(tuple((a, b * factor, c) for a, b, c in self.terms), self.cutoff)

    def truncate(self, cutoff) -> "QSeries":
        return QSeries.from_dict(self.as_dict(), min(Fraction(cutoff), self.cutoff))

    def __add__(self, other: "QSeries") -> "QSeries":
        out = self.as_dict()
        for k, c in other.as_dict().items():
            out[k] = out.get(k, 0) + c
        return QSeries.from_dict(out, min(self.cutoff, other.cutoff))

    def __mul__(self, other: "QSeries") -> "QSeries":
        if not self.terms or not other.terms:
            return QSeries((), min(self.cutoff, other.cutoff))
        cut = min(self.cutoff + other.leading_exponent, other.cutoff + self.leading_exponent)
        out: dict = {}
        for a1, b1, c1 in self.terms:
            for a2, b2, c2 in other.terms:
                if a1 + a2 < cut:
                    k = (a1 + a2, b1 + b2)
                    out[k] = out.get(k, 0) + c1 * c2
        return QSeries.from_dict(out, cut)

    def rows(self) -> list[dict]:
        return [{"exponent": str(a), "y_power": str(b), "coefficient": c}
                for a, b, c in self.terms]


# ---------------------------------------------------------------------------
# u(1) part

def k_function(l: int, m: int = 15, order=10) -> QSeries:
    """``sum_n q^{(m/2)(n + l/m)^2} y^{n + l/m}`` over the window ``order`` above its minimum."""
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")

    def expo(n):
        x = n + Fraction(l, m)
        return Fraction(m, 2) * x * x, x

    centre = -l // m
    lead = min(expo(n)[0] for n in range(centre - 1, centre + 2))
    cutoff = lead + order
    reach = math.isqrt(int(2 * cutoff / m) + 1) + 2
    coeffs = {}
    for n in range(centre - reach, centre + reach + 1):
        a, b = expo(n)
        if a < cutoff:
            coeffs[(a, b)] = coeffs.get((a, b), 0) + 1
    return QSeries.from_dict(coeffs, cutoff)


def eta_series(order: int = 10) -> QSeries:
    """``q^{1/24} prod_{n>=1} (1 - q^n)`` from Euler's pentagonal theorem."""
    coeffs = {}
    k = 0
    while True:
        hit = False
        for g in {k * (3 * k - 1) // 2, k * (3 * k + 1) // 2}:
            if g < order:
                coeffs[(Fraction(1, 24) + g, 0)] = (-1) ** k
                hit = True
        if not hit:
            break
        k += 1
    return QSeries.from_dict(coeffs, Fraction(1, 24) + order)


# ---------------------------------------------------------------------------
# parafermion part

@dataclass(frozen=True)
class CosetWeight:
    """Level-2 weight ``Lambda_mu + Lambda_nu`` with ``0 <= mu <= nu <= 2``."""

    mu: int
    nu: int

    def __post_init__(self):
        if not 0 <= self.mu <= self.nu <= 2:
            raise ValueError(f"need 0 <= mu <= nu <= 2, got ({self.mu}, {self.nu})")

    @classmethod
    def from_indices(cls, a: int, b: int) -> "CosetWeight":
        mu, nu = sorted((a % 3, b % 3))
        return cls(mu, nu)

    @classmethod
    def from_sigma_q(cls, sigma: int, q: int) -> "CosetWeight":
        return cls(q - sigma, q)

    @property
    def sigma(self) -> int:
        return self.nu - self.mu

    @property
    def Q(self) -> int:
        return self.nu

    @property
    def label(self) -> Label:
        return Label.from_weight(self.mu, self.nu)


def quadratic_exponent(m1: int, m2: int, sigma: int) -> Fraction:
    """``m . C^{-1} . (m - Lambda_sigma)``."""
    lam = LAMBDA[sigma]
    d = (m1 - lam[0], m2 - lam[1])
    return (m1 * (CARTAN_INV[0][0] * d[0] + CARTAN_INV[0][1] * d[1])
            + m2 * (CARTAN_INV[1][0] * d[0] + CARTAN_INV[1][1] * d[1]))


def pf_dimension(sigma: int) -> Fraction:
    return Fraction(sigma * (3 - sigma), 30)


@lru_cache(maxsize=None)
def _inverse_qpoch(m: int, degree: int) -> tuple[int, ...]:
    """Coefficients of ``1/(q)_m`` up to ``q^degree`` (partitions into parts <= m)."""
    c = [0] * (degree + 1)
    c[0] = 1
    for part in range(1, m + 1):
        for k in range(part, degree + 1):
            c[k] += c[k - part]
    return tuple(c)


def _admissible(m1, m2, q):
    return (m1 + 2 * m2 - q) % 3 == 0


def parafermion_char(sigma: int, Q: int, order=10) -> QSeries:
    """Fermionic sum for ``ch_{sigma,Q}``, complete for ``order`` above its leading power."""
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    if sigma not in (0, 1, 2):
        raise ValueError("sigma must be 0, 1 or 2")
    pref = pf_dimension(sigma) - Fraction(1, 30)
    # E(m) >= S^2/2 - 2S/3 with S = m1 + m2, so small S bounds the minimum
    probe = [quadratic_exponent(a, b, sigma) for a in range(5) for b in range(5)
             if _admissible(a, b, Q)]
    bound = min(probe) + order
    s_max = 1
    while Fraction(s_max * s_max, 2) - Fraction(2 * s_max, 3) < bound:
        s_max += 1
    coeffs: dict = {}
    for m1 in range(s_max + 1):
        for m2 in range(s_max + 1 - m1):
            if not _admissible(m1, m2, Q):
                continue
            e = quadratic_exponent(m1, m2, sigma)
            room = bound - e
            if room <= 0:
                continue
            deg = math.ceil(room)
            p1, p2 = _inverse_qpoch(m1, deg), _inverse_qpoch(m2, deg)
            for i, c1 in enumerate(p1):
                for j in range(deg + 1 - i):
                    a = pref + e + i + j
                    coeffs[(a, 0)] = coeffs.get((a, 0), 0) + c1 * p2[j]
    lead = pref + min(probe)
    return QSeries.from_dict(coeffs, lead + order)


def coset_char(weight: CosetWeight, order=10) -> QSeries:
    return parafermion_char(weight.sigma, weight.Q, order)


def full_character(l: int, rho: int, order=10) -> QSeries:
    """``sum_s K_{l+5s}(3 zeta; 15) ch(Lambda_{l-rho+s} + Lambda_{rho+s})``."""
    if l - rho > rho:
        raise ValueError(f"restriction l - rho <= rho violated for (l, rho) = ({l}, {rho})")
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    parts = []
    for s in range(3):
        w = CosetWeight.from_indices(l - rho + s, rho + s)
        k = k_function(l + 5 * s, 15, order + 2).scale_y(3)
        parts.append(k * coset_char(w, order + 2))
    lead = min(p.leading_exponent for p in parts)
    total = parts[0] + parts[1] + parts[2]
    return total.truncate(lead + order)


def summands(l: int, rho: int) -> list[dict]:
    """Sector data for each ``s``: the u(1) label and the paired coset weight."""
    out = []
    for s in range(3):
        w = CosetWeight.from_indices(l - rho + s, rho + s)
        out.append({"s": s, "u1_label": l + 5 * s, "mu": w.mu, "nu": w.nu,
                    "field": str(w.label), "pairing_ok": (w.mu + w.nu - (l + 5 * s)) % 3 == 0})
    return out


def primary_fields() -> list[dict]:
    """Quantum numbers of the six coset primaries."""
    rows = []
    for lab in (Label.I, Label.sigma1, Label.sigma2, Label.psi1, Label.eps, Label.psi2):
        mu, nu = lab.weight
        w = CosetWeight(mu, nu)
        rows.append({"field": str(lab), "mu": mu, "nu": nu, "dimension": lab.conformal_dimension,
                     "P": lab.z3_charge, "sigma": w.sigma, "Q": w.Q})
    return rows
