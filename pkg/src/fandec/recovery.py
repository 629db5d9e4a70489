"""Recover a product's factor multiset from its cohomological invariants.

The invariant bundle of a product over the recognized alphabet (CP^1,
PQ(p, q), Diag(r) with r >= 2, S^4) consists of the real census, the mod-2
square-zero counts restricted to the line class and to each diagonal
sphere class, the Poincare polynomial, and the complex dimension.  These
determine the multiset:

* off-diagonal census classes read off PQ(p, q) with p > q >= 1 directly
  (the (0, s) classes come in pairs, two per PQ(s+1, 1) factor);
* the line class gives a 2x2 integer system for the CP^1 and PQ(1, 1)
  counts (census 2m + 4m11, mod-2 count m + m11, determinant -2);
* each diagonal class (s, s) gives a 2x2 system separating PQ(p, p) from
  Diag(p), p = s+1: census m + n, mod-2 count (2^(2p-1)-1) m +
  (2^(2p-1)+2^(p-1)-1) n, determinant 2^(p-1);
* dividing the recovered factors out of the Poincare polynomial leaves
  (1+x^2)^n * prod (1+px+x^2)^(m_p0), disentangled by greedy exact
  division with a mandatory final-quotient-one check.

Any non-integral or negative solution, failed division, or leftover
quotient raises InconsistentBundleError: the bundle cannot come from the
alphabet.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError, InconsistentBundleError
from .polys import Poly, degree, normalize as poly_normalize, poly_div_exact
from .squarezero import (
    LINE,
    Component,
    Diag,
    FactorKind,
    FourSphere,
    PQ,
    ProductManifold,
    ProjLine,
    RealCensus,
    closed_count_mod2,
    component_label,
    component_sort_key,
    factor_census,
    poincare,
    real_census,
)


def _ensure_alphabet(pm: ProductManifold) -> None:
    for f in pm.factors:
        if isinstance(f, Diag) and f.r == 1:
            raise DomainError(
                "DIAG(1) is outside the recovery alphabet (it decomposes as CP1 * CP1); "
                "normalize it away before bundling"
            )


@dataclass(eq=True)
class InvariantBundle:
    """Census + restricted mod-2 counts + Poincare polynomial + dimension."""

    census: RealCensus
    class_mod2_counts: dict[Component, int]
    poincare_poly: Poly
    complex_dim: int

    def canonical_key(self) -> tuple:
        return (
            self.census.canonical(),
            tuple(sorted(self.class_mod2_counts.items(), key=lambda kv: component_sort_key(kv[0]))),
            self.poincare_poly,
            self.complex_dim,
        )

    def as_dict(self) -> dict:
        return {
            "census": self.census.as_dict(),
            "class_mod2_counts": {
                component_label(c): n
                for c, n in sorted(
                    self.class_mod2_counts.items(), key=lambda kv: component_sort_key(kv[0])
                )
            },
            "poincare_poly": list(self.poincare_poly),
            "complex_dim": self.complex_dim,
        }

    def to_text(self) -> str:
        """Canonical single-document serialization (sorted keys)."""
        return json.dumps(self.as_dict(), sort_keys=True)


@dataclass(frozen=True, eq=True)
class MultiplicityVector:
    """Factor multiplicities: m CP^1, m_pq PQ factors, n_r Diag factors, n S^4."""

    m: int = 0
    m_pq: dict[tuple[int, int], int] = field(default_factory=dict)
    n_r: dict[int, int] = field(default_factory=dict)
    n: int = 0

    def __post_init__(self):
        for name, v in (("m", self.m), ("n", self.n)):
            if not isinstance(v, int) or v < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {v!r}")
        pq = {}
        for key, count in self.m_pq.items():
            p, q = key
            if not (p >= q >= 0 and p + q >= 1):
                raise DomainError(f"m_pq key must satisfy p >= q >= 0, p+q >= 1, got {key}")
            if not isinstance(count, int) or count < 0:
                raise DomainError(f"m_pq[{key}] must be a nonnegative integer, got {count!r}")
            if count:
                pq[(p, q)] = count
        nr = {}
        for r, count in self.n_r.items():
            if not isinstance(r, int) or r < 2:
                raise DomainError(f"n_r keys must be integers >= 2 (no DIAG(1)), got {r!r}")
            if not isinstance(count, int) or count < 0:
                raise DomainError(f"n_r[{r}] must be a nonnegative integer, got {count!r}")
            if count:
                nr[r] = count
        object.__setattr__(self, "m_pq", pq)
        object.__setattr__(self, "n_r", nr)

    def __hash__(self):
        return hash(
            (self.m, tuple(sorted(self.m_pq.items())), tuple(sorted(self.n_r.items())), self.n)
        )

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "m_pq": {f"({p},{q})": c for (p, q), c in sorted(self.m_pq.items())},
            "n_r": {str(r): c for r, c in sorted(self.n_r.items())},
            "n": self.n,
        }

    def summary(self) -> str:
        parts = []
        if self.m:
            parts.append(f"m={self.m}")
        for (p, q), c in sorted(self.m_pq.items()):
            parts.append(f"m_{{{p},{q}}}={c}")
        for r, c in sorted(self.n_r.items()):
            parts.append(f"n_{r}={c}")
        if self.n:
            parts.append(f"n={self.n}")
        return ", ".join(parts) if parts else "all zero"


def realize(v: MultiplicityVector) -> ProductManifold:
    """The product manifold with these multiplicities."""
    factors: list[FactorKind] = [ProjLine()] * v.m
    for (p, q), count in sorted(v.m_pq.items()):
        factors.extend([PQ(p, q)] * count)
    for r, count in sorted(v.n_r.items()):
        factors.extend([Diag(r)] * count)
    factors.extend([FourSphere()] * v.n)
    return ProductManifold(factors)


def multiplicities_of(pm: ProductManifold) -> MultiplicityVector:
    """Multiplicity vector of an alphabet product (inverse of realize)."""
    _ensure_alphabet(pm)
    m = 0
    n = 0
    m_pq: dict[tuple[int, int], int] = {}
    n_r: dict[int, int] = {}
    for f in pm.factors:
        if isinstance(f, ProjLine):
            m += 1
        elif isinstance(f, PQ):
            m_pq[(f.p, f.q)] = m_pq.get((f.p, f.q), 0) + 1
        elif isinstance(f, Diag):
            n_r[f.r] = n_r.get(f.r, 0) + 1
        else:
            n += 1
    return MultiplicityVector(m=m, m_pq=m_pq, n_r=n_r, n=n)


def bundle(pm: ProductManifold) -> InvariantBundle:
    """Invariant bundle of an alphabet product."""
    _ensure_alphabet(pm)
    census = real_census(pm)
    mod2: dict[Component, int] = {}
    for f in pm.factors:
        classes = set(factor_census(f))
        if LINE in classes:
            key: Component = LINE
        else:
            diagonal = [c for c in classes if c != LINE and c[0] == c[1]]
            if not diagonal:
                continue
            key = diagonal[0]
        mod2[key] = mod2.get(key, 0) + closed_count_mod2(f)
    return InvariantBundle(
        census=census,
        class_mod2_counts=mod2,
        poincare_poly=poincare(pm),
        complex_dim=pm.complex_dim,
    )


def _exact_divide(quotient: Poly, divisor: Poly, times: int, what: str) -> Poly:
    for _ in range(times):
        nxt = poly_div_exact(quotient, divisor)
        if nxt is None:
            raise InconsistentBundleError(
                f"poincare polynomial is not divisible by the recovered {what} contribution"
            )
        quotient = nxt
    return quotient


def recover_poincare_tail(poly: Poly) -> tuple[int, dict[int, int]]:
    """Split a polynomial as (1+x^2)^n * prod (1+px+x^2)^(m_p0).

    Greedy exact division, p descending from the linear coefficient (the
    sum of the true p's bounds each of them), then the (1+x^2) power; the
    quotient must finish at 1.
    """
    cur = poly_normalize(poly)
    m_p0: dict[int, int] = {}
    top_linear = cur[1] if len(cur) > 1 else 0
    for p in range(top_linear, 0, -1):
        while True:
            nxt = poly_div_exact(cur, (1, p, 1))
            if nxt is None:
                break
            m_p0[p] = m_p0.get(p, 0) + 1
            cur = nxt
    n = 0
    while cur != (1,):
        nxt = poly_div_exact(cur, (1, 0, 1))
        if nxt is None:
            raise InconsistentBundleError(
                f"poincare remainder {list(cur)} is not a power of the S4 contribution"
            )
        n += 1
        cur = nxt
    return n, m_p0


def recover(b: InvariantBundle) -> MultiplicityVector:
    """Solve the bundle for the unique alphabet multiplicities."""
    census = dict(b.census.components)
    mod2 = dict(b.class_mod2_counts)
    m_pq: dict[tuple[int, int], int] = {}
    n_r: dict[int, int] = {}

    for key in mod2:
        if key != LINE and (key[0] != key[1] or key[0] < 1):
            raise InconsistentBundleError(
                f"mod-2 count attached to non-diagonal class {component_label(key)}"
            )

    for comp, count in sorted(
        ((c, n) for c, n in census.items() if c != LINE), key=lambda kv: component_sort_key(kv[0])
    ):
        a, s = comp
        if a == s:
            continue
        if a == 0:
            # each PQ(s+1, 1) factor contributes two such components
            if count % 2:
                raise InconsistentBundleError(
                    f"census class {component_label(comp)} count {count} must be even"
                )
            m_pq[(s + 1, 1)] = count // 2
        else:
            m_pq[(s + 1, a + 1)] = count

    # line class: census 2m + 4*m11, mod-2 m + m11
    cen_line = census.get(LINE, 0)
    mod_line = mod2.pop(LINE, 0)
    twice_m11 = cen_line - 2 * mod_line
    if twice_m11 < 0 or twice_m11 % 2:
        raise InconsistentBundleError(
            f"line class counts (census {cen_line}, mod-2 {mod_line}) admit no solution"
        )
    m11 = twice_m11 // 2
    m = mod_line - m11
    if m < 0:
        raise InconsistentBundleError(
            f"line class counts (census {cen_line}, mod-2 {mod_line}) give a negative CP1 count"
        )
    if m11:
        m_pq[(1, 1)] = m11

    diagonal_classes = sorted(
        {c for c in census if c != LINE and c[0] == c[1]} | set(mod2),
        key=component_sort_key,
    )
    for comp in diagonal_classes:
        s = comp[0]
        p = s + 1
        cen = census.get(comp, 0)
        mod = mod2.pop(comp, 0)
        base = 2 ** (2 * p - 1) - 1
        step = 2 ** (p - 1)
        numerator = mod - base * cen
        if numerator < 0 or numerator % step:
            raise InconsistentBundleError(
                f"diagonal class {component_label(comp)} counts (census {cen}, mod-2 {mod}) "
                f"admit no integral solution"
            )
        n_p = numerator // step
        mpp = cen - n_p
        if mpp < 0:
            raise InconsistentBundleError(
                f"diagonal class {component_label(comp)} counts give a negative PQ({p},{p}) count"
            )
        if mpp:
            m_pq[(p, p)] = mpp
        if n_p:
            n_r[p] = n_p

    if degree(b.poincare_poly) != b.complex_dim:
        raise InconsistentBundleError(
            f"poincare degree {degree(b.poincare_poly)} does not match "
            f"complex dimension {b.complex_dim}"
        )

    quotient = poly_normalize(b.poincare_poly)
    quotient = _exact_divide(quotient, (1, 1), m, "CP1")
    for (p, q), count in sorted(m_pq.items()):
        quotient = _exact_divide(quotient, (1, p + q, 1), count, f"PQ({p},{q})")
    for r, count in sorted(n_r.items()):
        quotient = _exact_divide(quotient, (1, 2 * r, 1), count, f"DIAG({r})")
    n, m_p0 = recover_poincare_tail(quotient)
    for p, count in m_p0.items():
        m_pq[(p, 0)] = count
    return MultiplicityVector(m=m, m_pq=m_pq, n_r=n_r, n=n)


def same_decomposition(a: ProductManifold, b: ProductManifold) -> bool:
    """Whether two alphabet products have equal factor multisets."""
    _ensure_alphabet(a)
    _ensure_alphabet(b)
    return a.factors == b.factors


def cancellation_check(a: ProductManifold, b: ProductManifold, c: ProductManifold) -> bool:
    """same_decomposition(a, b), asserting the cancellation law on this instance:
    the bundles of a*c and b*c agree exactly when the bundles of a and b do."""
    _ensure_alphabet(a)
    _ensure_alphabet(b)
    _ensure_alphabet(c)
    result = same_decomposition(a, b)
    with_c = bundle(a * c) == bundle(b * c)
    without_c = bundle(a) == bundle(b)
    assert with_c == without_c, "cancellation law violated on this instance"
    return result
