"""Vector-bundle maps between algebroids and the induced calculus.

A bundle map consists of a polynomial base map (target coordinates as
polynomials in the source coordinates, possibly with t) and a fiber matrix
(target frame index first).  It induces the pullback on forms, which on
generators reads

    pullback(y_j)         = base_map[j]
    pullback(eps^b)       = sum_a fiber[b][a] e^a

and extends multiplicatively over wedges, substituting the base map into
coefficients.  A map whose entries contain t is a smooth family of maps,
and every check runs as a polynomial identity in t.

A supported section attaches a target-frame vector to each source point
along the base map.  Its slot-one contraction

    i(g eps^{b1}^...^eps^{bk}) = (g o phi) sum_j (-1)^(j-1) theta^{bj}
                                  pullback(eps^{b1}) ^ ...omit j... ^ pullback(eps^{bk})

is the degree -1 derivation relative to the pullback; sections and such
derivations determine each other through the values on the basis covectors.
"""

from __future__ import annotations

from typing import Sequence

from .algebroid import LieAlgebroid, _as_poly
from .exterior import AlgebroidForm
from .poly import TIME, Polynomial, Scalar, merge_vars
from .report import Report


class BundleMap:
    """Polynomial vector-bundle map between two presented algebroids."""

    __slots__ = ("source", "target", "base_map", "fiber", "ring")

    def __init__(
        self,
        source: LieAlgebroid,
        target: LieAlgebroid,
        base_map: Sequence[Polynomial | Scalar],
        fiber: Sequence[Sequence[Polynomial | Scalar]],
    ):
        if len(base_map) != target.base_dim:
            raise ValueError(
                f"base map needs {target.base_dim} components, got {len(base_map)}"
            )
        if len(fiber) != target.rank or any(len(row) != source.rank for row in fiber):
            raise ValueError(
                f"fiber matrix must be {target.rank} x {source.rank}"
            )
        uses_t = False
        raw_base = []
        raw_fiber = []
        for entry in base_map:
            p = entry if isinstance(entry, Polynomial) else None
            raw_base.append(entry)
            if p is not None and p.uses(TIME):
                uses_t = True
        for row in fiber:
            raw_fiber.append(list(row))
            for entry in row:
                if isinstance(entry, Polynomial) and entry.uses(TIME):
                    uses_t = True
        ring = merge_vars(source.coords, (TIME,)) if uses_t else source.coords
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(
            self, "base_map", tuple(_as_poly(v, ring) for v in raw_base)
        )
        object.__setattr__(
            self,
            "fiber",
            tuple(tuple(_as_poly(v, ring) for v in row) for row in raw_fiber),
        )

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("BundleMap is immutable")

    @property
    def time_dependent(self) -> bool:
        return TIME in self.ring

    def __eq__(self, other) -> bool:
        if not isinstance(other, BundleMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        ring = merge_vars(self.ring, other.ring)
        if any(
            p.with_vars(ring) != q.with_vars(ring)
            for p, q in zip(self.base_map, other.base_map)
        ):
            return False
        return all(
            p.with_vars(ring) == q.with_vars(ring)
            for prow, qrow in zip(self.fiber, other.fiber)
            for p, q in zip(prow, qrow)
        )

    def __hash__(self):  # pragma: no cover
        return hash((self.source, self.target))

    def __repr__(self) -> str:
        return (
            f"BundleMap({len(self.base_map)} base components, "
            f"fiber {self.target.rank}x{self.source.rank}, ring {self.ring})"
        )

    # ------------------------------------------------------------------
    # ring helpers

    def with_time(self) -> "BundleMap":
        """The same map with t adjoined to its ring."""
        if self.time_dependent:
            return self
        ring = merge_vars(self.source.coords, (TIME,))
        return BundleMap(
            self.source,
            self.target,
            [p.with_vars(ring) for p in self.base_map],
            [[p.with_vars(ring) for p in row] for row in self.fiber],
        )

    def at_time(self, value: Scalar) -> "BundleMap":
        """Freeze t to a rational value; the result has a t-free ring."""
        coords = self.source.coords
        mapping: dict[str, Polynomial | Scalar] = {
            name: Polynomial.variable(coords, name) for name in coords
        }
        mapping[TIME] = value
        return BundleMap(
            self.source,
            self.target,
            [p.subs(mapping, vars=coords) for p in self.base_map],
            [[p.subs(mapping, vars=coords) for p in row] for row in self.fiber],
        )

    def _pull_ring(self, w: AlgebroidForm | None = None) -> tuple[str, ...]:
        needs_t = self.time_dependent
        if w is not None:
            for coeff in w.components.values():
                if coeff.uses(TIME):
                    needs_t = True
                    break
        if needs_t:
            return merge_vars(self.source.coords, (TIME,))
        return self.source.coords

    def _coefficient_mapping(self, ring: Sequence[str]) -> dict[str, Polynomial]:
        mapping = {
            name: self.base_map[j].with_vars(ring)
            for j, name in enumerate(self.target.coords)
        }
        if TIME in ring:
            mapping[TIME] = Polynomial.variable(ring, TIME)
        return mapping

    def pulled_covector(self, b: int, ring: Sequence[str]) -> AlgebroidForm:
        """pullback(eps^b) as a 1-form on the source frame."""
        comps = {
            (a,): self.fiber[b][a].with_vars(ring)
            for a in range(self.source.rank)
            if not self.fiber[b][a].is_zero()
        }
        return AlgebroidForm(self.source.rank, 1, comps)

    # ------------------------------------------------------------------
    # the pullback and the morphism test

    def pullback(self, w: AlgebroidForm) -> AlgebroidForm:
        """Pull a form on the target back to the source frame."""
        if w.rank != self.target.rank:
            raise ValueError(
                f"form rank {w.rank} does not match target rank {self.target.rank}"
            )
        ring = self._pull_ring(w)
        mapping = self._coefficient_mapping(ring)
        result = AlgebroidForm.zero(self.source.rank, w.degree)
        for idx, coeff in w.components.items():
            term = AlgebroidForm.function(
                self.source.rank, coeff.subs(mapping, vars=ring)
            )
            for b in idx:
                term = term.wedge(self.pulled_covector(b, ring))
            result = result + term
        return result

    def is_morphism(self) -> Report:
        """Check commutation with the differentials on every generator.

        Both the pulled differential and the differential of the pullback
        are derivations along the pullback, so agreement on the coordinate
        functions and basis covectors of the target forces agreement on all
        forms.  Entries containing t are checked as identities in t.
        """
        report = Report(title="pullback commutes with the differentials")
        ring = self._pull_ring()
        for j, name in enumerate(self.target.coords):
            lhs = self.pullback(self.target.d_coordinate(j))
            rhs = self.source.d_function(self.base_map[j])
            residual = lhs.map_coefficients(lambda p: p.with_vars(ring)) - (
                rhs.map_coefficients(lambda p: p.with_vars(ring))
            )
            report.add(
                f"generator {name}",
                residual.is_zero(),
                () if residual.is_zero() else (f"residual: {residual.render()}",),
            )
        for b in range(self.target.rank):
            lhs = self.pullback(self.target.d_frame_covector(b))
            rhs = self.source.differential(self.pulled_covector(b, ring))
            ring2 = merge_vars(ring, lhs.ring() or ring, rhs.ring() or ring)
            residual = lhs.map_coefficients(lambda p: p.with_vars(ring2)) - (
                rhs.map_coefficients(lambda p: p.with_vars(ring2))
            )
            report.add(
                f"generator e^{b + 1} (target frame)",
                residual.is_zero(),
                () if residual.is_zero() else (f"residual: {residual.render()}",),
            )
        return report


def identity_map(algebroid: LieAlgebroid) -> BundleMap:
    base = [
        Polynomial.variable(algebroid.coords, name) for name in algebroid.coords
    ]
    fiber = [
        [1 if a == b else 0 for a in range(algebroid.rank)]
        for b in range(algebroid.rank)
    ]
    return BundleMap(algebroid, algebroid, base, fiber)


def compose(outer: BundleMap, inner: BundleMap) -> BundleMap:
    """outer after inner: substitution in base, matrix product in fiber."""
    if inner.target != outer.source:
        raise ValueError("cannot compose: inner target differs from outer source")
    ring = merge_vars(inner.ring, (TIME,)) if outer.time_dependent else inner.ring
    mapping = {
        name: inner.base_map[j].with_vars(ring)
        for j, name in enumerate(outer.source.coords)
    }
    if TIME in ring:
        mapping[TIME] = Polynomial.variable(ring, TIME)
    base = [p.subs(mapping, vars=ring) for p in outer.base_map]
    fiber = []
    for c in range(outer.target.rank):
        row = []
        for a in range(inner.source.rank):
            acc = Polynomial.zero(ring)
            for b in range(inner.target.rank):
                entry = outer.fiber[c][b]
                if entry.is_zero() or inner.fiber[b][a].is_zero():
                    continue
                acc = acc + entry.subs(mapping, vars=ring) * inner.fiber[b][a].with_vars(ring)
            row.append(acc)
        fiber.append(row)
    return BundleMap(inner.source, outer.target, base, fiber)


class SupportedSection:
    """Target-frame vector field along the base map of a bundle map."""

    __slots__ = ("source", "target", "base_map", "components")

    def __init__(
        self,
        source: LieAlgebroid,
        target: LieAlgebroid,
        base_map: Sequence[Polynomial | Scalar],
        components: Sequence[Polynomial | Scalar],
    ):
        if len(base_map) != target.base_dim:
            raise ValueError(
                f"base map needs {target.base_dim} components, got {len(base_map)}"
            )
        if len(components) != target.rank:
            raise ValueError(
                f"section needs {target.rank} components, got {len(components)}"
            )
        uses_t = any(
            isinstance(p, Polynomial) and p.uses(TIME)
            for p in list(base_map) + list(components)
        )
        ring = merge_vars(source.coords, (TIME,)) if uses_t else source.coords
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "base_map", tuple(_as_poly(v, ring) for v in base_map))
        object.__setattr__(
            self, "components", tuple(_as_poly(v, ring) for v in components)
        )

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("SupportedSection is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SupportedSection):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        ring = merge_vars(
            self.base_map[0].vars if self.base_map else self.source.coords,
            other.base_map[0].vars if other.base_map else other.source.coords,
            (TIME,),
        )
        same_base = all(
            p.with_vars(ring) == q.with_vars(ring)
            for p, q in zip(self.base_map, other.base_map)
        )
        return same_base and all(
            p.with_vars(ring) == q.with_vars(ring)
            for p, q in zip(self.components, other.components)
        )

    def __repr__(self) -> str:
        comps = ", ".join(p.to_text() for p in self.components)
        return f"SupportedSection([{comps}])"

    def scaled(self, factor: Scalar) -> "SupportedSection":
        return SupportedSection(
            self.source,
            self.target,
            self.base_map,
            [factor * p for p in self.components],
        )


def _check_shared_base(theta: SupportedSection, fmap: BundleMap) -> None:
    if theta.source != fmap.source or theta.target != fmap.target:
        raise ValueError("section and map live over different algebroids")
    ring = merge_vars(fmap.ring, theta.base_map[0].vars if theta.base_map else ())
    for p, q in zip(theta.base_map, fmap.base_map):
        if p.with_vars(ring) != q.with_vars(ring):
            raise ValueError("section and map do not share a base map")


def contraction(
    theta: SupportedSection, fmap: BundleMap, w: AlgebroidForm
) -> AlgebroidForm:
    """Slot-one contraction of a target form, landing on the source frame.

    Degree-0 input returns the zero form of degree -1 (the derivation kills
    functions) rather than raising.
    """
    _check_shared_base(theta, fmap)
    if w.rank != fmap.target.rank:
        raise ValueError(
            f"form rank {w.rank} does not match target rank {fmap.target.rank}"
        )
    if w.degree == 0:
        return AlgebroidForm.zero(fmap.source.rank, -1)
    needs_t = any(p.uses(TIME) for p in theta.components)
    ring = fmap._pull_ring(w)
    if needs_t and TIME not in ring:
        ring = merge_vars(ring, (TIME,))
    mapping = fmap._coefficient_mapping(ring)
    comps = [p.with_vars(ring) for p in theta.components]
    pulled = [fmap.pulled_covector(b, ring) for b in range(fmap.target.rank)]
    result = AlgebroidForm.zero(fmap.source.rank, w.degree - 1)
    for idx, coeff in w.components.items():
        pushed = coeff.subs(mapping, vars=ring)
        for j, b in enumerate(idx):
            if comps[b].is_zero():
                continue
            factor = pushed * comps[b]
            if j % 2 == 1:
                factor = -factor
            term = AlgebroidForm.function(fmap.source.rank, factor)
            for l, b2 in enumerate(idx):
                if l != j:
                    term = term.wedge(pulled[b2])
            result = result + term
    return result


def derivation_to_section(
    values: Sequence[Polynomial | Scalar], fmap: BundleMap
) -> SupportedSection:
    """Rebuild the section from the values of a degree -1 derivation on the
    basis covectors: theta^b = V(eps^b)."""
    if len(values) != fmap.target.rank:
        raise ValueError(
            f"need {fmap.target.rank} basis values, got {len(values)}"
        )
    return SupportedSection(fmap.source, fmap.target, fmap.base_map, values)
