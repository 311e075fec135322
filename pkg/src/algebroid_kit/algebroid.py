"""Lie algebroids in a global polynomial frame, and their differential.

An algebroid is presented by one chart and one frame: base coordinates
x1..xm, frame e_1..e_r, an anchor matrix rho with polynomial entries (column
a is the vector field attached to e_a), and antisymmetric structure
functions c^c_ab with [e_a, e_b] = sum_c c^c_ab e_c.

The differential is computed on generators and extended as a degree-1
derivation of the wedge product:

    d f   = sum_a ( sum_i rho^i_a df/dx_i ) e^a
    d e^c = -(1/2) sum_{a,b} c^c_ab e^a ^ e^b

The -1/2 follows from the pairing convention <d e^c, e_a ^ e_b> = -c^c_ab
together with the determinant convention for evaluating wedges: evaluating
-(1/2) sum c^c_ab e^a^e^b on (e_a, e_b) gives -(1/2)(c^c_ab - c^c_ba)
= -c^c_ab.

Coefficients may contain the time variable t; the differential treats t as
a constant parameter (it only ever differentiates along base coordinates).

Base dimension 0 is allowed and presents a Lie algebra by its structure
constants.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .exterior import AlgebroidForm
from .poly import Polynomial, Scalar, merge_vars
from .report import Report


def _as_poly(value: Polynomial | Scalar, ring: Sequence[str]) -> Polynomial:
    if isinstance(value, Polynomial):
        return value.with_vars(ring) if value.vars != tuple(ring) else value
    return Polynomial.constant(ring, value)


class LieAlgebroid:
    """Rank-r Lie algebroid data over a polynomial base chart."""

    __slots__ = ("coords", "rank", "anchor", "brackets")

    def __init__(
        self,
        coords: Sequence[str],
        rank: int,
        anchor: Sequence[Sequence[Polynomial | Scalar]] | None = None,
        brackets: Mapping[tuple[int, int], Sequence[Polynomial | Scalar]] | None = None,
    ):
        """anchor[a][i] is the coefficient of d/dx_i in the vector field of e_a;
        brackets[(a, b)] (with a < b, 0-based) lists the r components of
        [e_a, e_b].  Omitted rows and brackets are zero.
        """
        coords = tuple(coords)
        if rank < 0:
            raise ValueError("rank must be >= 0")
        m = len(coords)
        rows = []
        anchor = anchor if anchor is not None else [[0] * m for _ in range(rank)]
        if len(anchor) != rank:
            raise ValueError(f"anchor must have {rank} rows, got {len(anchor)}")
        for row in anchor:
            if len(row) != m:
                raise ValueError(f"anchor row must have {m} entries, got {len(row)}")
            rows.append(tuple(_as_poly(v, coords) for v in row))
        table: dict[tuple[int, int], tuple[Polynomial, ...]] = {}
        for (a, b), comps in (brackets or {}).items():
            if not (0 <= a < b < rank):
                raise ValueError(f"bracket key ({a}, {b}) must satisfy 0 <= a < b < rank")
            if len(comps) != rank:
                raise ValueError(
                    f"bracket ({a}, {b}) must have {rank} components, got {len(comps)}"
                )
            entry = tuple(_as_poly(v, coords) for v in comps)
            if any(not p.is_zero() for p in entry):
                table[(a, b)] = entry
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "anchor", tuple(rows))
        object.__setattr__(self, "brackets", table)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("LieAlgebroid is immutable")

    @property
    def base_dim(self) -> int:
        return len(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebroid):
            return NotImplemented
        return (
            self.coords == other.coords
            and self.rank == other.rank
            and self.anchor == other.anchor
            and self.brackets == other.brackets
        )

    def __hash__(self):  # pragma: no cover
        return hash((self.coords, self.rank))

    def __repr__(self) -> str:
        return (
            f"LieAlgebroid(coords={self.coords!r}, rank={self.rank}, "
            f"{len(self.brackets)} nonzero brackets)"
        )

    # ------------------------------------------------------------------
    # structure access

    def structure(self, a: int, b: int) -> tuple[Polynomial, ...]:
        """Components of [e_a, e_b], extended antisymmetrically."""
        zero = tuple(Polynomial.zero(self.coords) for _ in range(self.rank))
        if a == b:
            return zero
        if a < b:
            return self.brackets.get((a, b), zero)
        comps = self.brackets.get((b, a))
        if comps is None:
            return zero
        return tuple(-p for p in comps)

    def zero_poly(self) -> Polynomial:
        return Polynomial.zero(self.coords)

    def coordinate(self, i: int) -> Polynomial:
        return Polynomial.variable(self.coords, self.coords[i])

    # ------------------------------------------------------------------
    # the differential

    def d_coordinate(self, i: int, ring: Sequence[str] | None = None) -> AlgebroidForm:
        """d x_i = sum_a rho^i_a e^a."""
        ring = tuple(ring) if ring is not None else self.coords
        comps = {
            (a,): self.anchor[a][i].with_vars(ring)
            for a in range(self.rank)
            if not self.anchor[a][i].is_zero()
        }
        return AlgebroidForm(self.rank, 1, comps)

    def d_frame_covector(self, c: int, ring: Sequence[str] | None = None) -> AlgebroidForm:
        """d e^c = - sum_{a<b} c^c_ab e^a ^ e^b."""
        ring = tuple(ring) if ring is not None else self.coords
        comps: dict[tuple[int, int], Polynomial] = {}
        for (a, b), entry in self.brackets.items():
            coeff = entry[c]
            if not coeff.is_zero():
                comps[(a, b)] = -coeff.with_vars(ring)
        return AlgebroidForm(self.rank, 2, comps)

    def d_function(self, f: Polynomial) -> AlgebroidForm:
        ring = merge_vars(self.coords, f.vars)
        f = f.with_vars(ring)
        comps: dict[tuple[int, ...], Polynomial] = {}
        for a in range(self.rank):
            acc = Polynomial.zero(ring)
            for i, name in enumerate(self.coords):
                df = f.diff(name)
                if df.is_zero():
                    continue
                acc = acc + self.anchor[a][i].with_vars(ring) * df
            if not acc.is_zero():
                comps[(a,)] = acc
        return AlgebroidForm(self.rank, 1, comps)

    def differential(self, w: AlgebroidForm) -> AlgebroidForm:
        """The degree-1 derivation extending d on functions and covectors."""
        if w.rank != self.rank:
            raise ValueError(f"form rank {w.rank} does not match algebroid rank {self.rank}")
        result = AlgebroidForm.zero(self.rank, w.degree + 1)
        for idx, coeff in w.components.items():
            ring = merge_vars(self.coords, coeff.vars)
            one = Polynomial.constant(ring, 1)
            frame = AlgebroidForm.monomial(self.rank, idx, one)
            result = result + self.d_function(coeff).wedge(frame)
            for j, c in enumerate(idx):
                term = self.d_frame_covector(c, ring)
                left = AlgebroidForm.monomial(self.rank, idx[:j], one)
                right = AlgebroidForm.monomial(self.rank, idx[j + 1 :], one)
                piece = left.wedge(term).wedge(right) * coeff.with_vars(ring)
                if j % 2 == 1:
                    piece = -piece
                result = result + piece
        return result

    # ------------------------------------------------------------------
    # validation

    def validate_dga(self) -> Report:
        """Check d^2 = 0 on every generator (coordinates and frame covectors).

        d^2 is an even-degree derivation, so vanishing on the generators of
        the algebra forces it to vanish on every form.
        """
        report = Report(title="d^2 = 0 on generators")
        for i, name in enumerate(self.coords):
            residual = self.differential(self.d_coordinate(i))
            report.add(
                f"d^2({name}) = 0",
                residual.is_zero(),
                () if residual.is_zero() else (f"residual: {residual.render()}",),
            )
        for c in range(self.rank):
            residual = self.differential(self.d_frame_covector(c))
            report.add(
                f"d^2(e^{c + 1}) = 0",
                residual.is_zero(),
                () if residual.is_zero() else (f"residual: {residual.render()}",),
            )
        return report

    def bracket_axioms_oracle(self) -> Report:
        """Directly expand the bracket axioms as polynomial identities.

        Checks, independently of the differential route:
          * anchor compatibility rho([e_a, e_b]) = [rho(e_a), rho(e_b)] as
            vector fields, for all a < b;
          * the Jacobi identity on all frame triples, expanding the nested
            brackets with the Leibniz rule
            [e_a, f e_d] = f [e_a, e_d] + (L_{rho(e_a)} f) e_d.
        """
        report = Report(title="bracket axioms (direct expansion)")
        ring = self.coords
        for a in range(self.rank):
            for b in range(a + 1, self.rank):
                entry = self.structure(a, b)
                for i, name in enumerate(ring):
                    lhs = Polynomial.zero(ring)
                    for c in range(self.rank):
                        if not entry[c].is_zero():
                            lhs = lhs + entry[c] * self.anchor[c][i]
                    rhs = Polynomial.zero(ring)
                    for j, jname in enumerate(ring):
                        rhs = rhs + self.anchor[a][j] * self.anchor[b][i].diff(jname)
                        rhs = rhs - self.anchor[b][j] * self.anchor[a][i].diff(jname)
                    residual = lhs - rhs
                    report.add(
                        f"anchor([e{a + 1},e{b + 1}]) component d/d{name}",
                        residual.is_zero(),
                        () if residual.is_zero() else (f"residual: {residual.to_text()}",),
                    )
        for a in range(self.rank):
            for b in range(a + 1, self.rank):
                for c in range(b + 1, self.rank):
                    residual = self._jacobiator(a, b, c)
                    ok = all(p.is_zero() for p in residual)
                    details = ()
                    if not ok:
                        details = tuple(
                            f"component e{e + 1}: {p.to_text()}"
                            for e, p in enumerate(residual)
                            if not p.is_zero()
                        )
                    report.add(f"Jacobi(e{a + 1}, e{b + 1}, e{c + 1})", ok, details)
        return report

    def _jacobiator(self, a: int, b: int, c: int) -> list[Polynomial]:
        ring = self.coords
        total = [Polynomial.zero(ring) for _ in range(self.rank)]
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            inner = self.structure(y, z)
            for d in range(self.rank):
                coeff = inner[d]
                if not coeff.is_zero():
                    outer = self.structure(x, d)
                    for e in range(self.rank):
                        if not outer[e].is_zero():
                            total[e] = total[e] + coeff * outer[e]
                lie = Polynomial.zero(ring)
                for i, name in enumerate(ring):
                    lie = lie + self.anchor[x][i] * coeff.diff(name)
                if not lie.is_zero():
                    total[d] = total[d] + lie
        return total


def tangent_bundle(m: int, prefix: str = "x") -> LieAlgebroid:
    """The tangent bundle of R^m: identity anchor, zero brackets."""
    names = tuple(f"{prefix}{i + 1}" for i in range(m))
    anchor = [
        [Polynomial.constant(names, 1 if i == a else 0) for i in range(m)]
        for a in range(m)
    ]
    return LieAlgebroid(names, m, anchor, {})
