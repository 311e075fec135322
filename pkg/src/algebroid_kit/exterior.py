"""Graded exterior algebra over a fixed frame with polynomial coefficients.

A form of degree k on a rank-r frame is stored sparsely as a map from
strictly increasing index tuples (0-based internally, rendered 1-based) to
polynomial coefficients.  Antisymmetry is implicit in the representation and
zero coefficients are never stored, so equality is structural.

Degrees outside 0..rank are allowed only for the zero form; they arise
naturally as d of a top-degree form or as the contraction of a function.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .poly import Polynomial, Scalar

Index = tuple[int, ...]


class FormError(ValueError):
    """Structural error in an exterior-algebra operation."""


class AlgebroidForm:
    """Exterior form over a rank-r frame, with Polynomial coefficients."""

    __slots__ = ("rank", "degree", "components")

    def __init__(
        self,
        rank: int,
        degree: int,
        components: Mapping[Index, Polynomial] | None = None,
    ):
        comps: dict[Index, Polynomial] = {}
        ring: tuple[str, ...] | None = None
        for idx, coeff in (components or {}).items():
            idx = tuple(idx)
            if coeff.is_zero():
                continue
            if len(idx) != degree:
                raise FormError(f"index {idx} does not have degree {degree}")
            if any(i < 0 or i >= rank for i in idx):
                raise FormError(f"index {idx} out of range for rank {rank}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise FormError(f"index {idx} is not strictly increasing")
            if ring is None:
                ring = coeff.vars
            elif coeff.vars != ring:
                raise FormError(
                    f"mixed coefficient rings {ring} and {coeff.vars}"
                )
            comps[idx] = coeff
        if comps and not (0 <= degree <= rank):
            raise FormError(f"nonzero form of degree {degree} on rank {rank}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("AlgebroidForm is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, rank: int, degree: int) -> "AlgebroidForm":
        return cls(rank, degree, {})

    @classmethod
    def function(cls, rank: int, value: Polynomial) -> "AlgebroidForm":
        """Degree-0 form wrapping a single polynomial."""
        return cls(rank, 0, {(): value})

    @classmethod
    def covector(cls, rank: int, index: int, coeff: Polynomial) -> "AlgebroidForm":
        """coeff * e^index (0-based index)."""
        return cls(rank, 1, {(index,): coeff})

    @classmethod
    def monomial(
        cls, rank: int, indices: Sequence[int], coeff: Polynomial
    ) -> "AlgebroidForm":
        """coeff * e^i1 ^ ... ^ e^ik for strictly increasing indices."""
        return cls(rank, len(tuple(indices)), {tuple(indices): coeff})

    # ------------------------------------------------------------------
    # queries

    def is_zero(self) -> bool:
        return not self.components

    def ring(self) -> tuple[str, ...] | None:
        """Coefficient ring, or None for the zero form."""
        for coeff in self.components.values():
            return coeff.vars
        return None

    def as_polynomial(self) -> Polynomial:
        """The coefficient of a degree-0 form (requires a known ring)."""
        if self.degree != 0:
            raise FormError("not a degree-0 form")
        if not self.components:
            raise FormError("zero form has no ring; handle separately")
        return self.components[()]

    def coefficient(self, indices: Sequence[int], ring: Sequence[str]) -> Polynomial:
        return self.components.get(tuple(indices), Polynomial.zero(ring))

    # ------------------------------------------------------------------
    # linear structure

    def __add__(self, other: "AlgebroidForm") -> "AlgebroidForm":
        self._check_compatible(other)
        out = dict(self.components)
        for idx, coeff in other.components.items():
            if idx in out:
                out[idx] = out[idx] + coeff
            else:
                out[idx] = coeff
        return AlgebroidForm(self.rank, self.degree, out)

    def __neg__(self) -> "AlgebroidForm":
        return AlgebroidForm(
            self.rank, self.degree, {i: -c for i, c in self.components.items()}
        )

    def __sub__(self, other: "AlgebroidForm") -> "AlgebroidForm":
        return self + (-other)

    def __mul__(self, factor: Polynomial | Scalar) -> "AlgebroidForm":
        out = {i: c * factor for i, c in self.components.items()}
        return AlgebroidForm(self.rank, self.degree, out)

    __rmul__ = __mul__

    def map_coefficients(self, fn) -> "AlgebroidForm":
        """Apply fn to every coefficient, keeping the degree."""
        return AlgebroidForm(
            self.rank, self.degree, {i: fn(c) for i, c in self.components.items()}
        )

    def _check_compatible(self, other: "AlgebroidForm") -> None:
        if self.rank != other.rank:
            raise FormError(f"rank mismatch: {self.rank} vs {other.rank}")
        if self.degree != other.degree:
            raise FormError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebroidForm):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.degree == other.degree
            and self.components == other.components
        )

    def __hash__(self):  # pragma: no cover
        return hash((self.rank, self.degree, frozenset(self.components)))

    # ------------------------------------------------------------------
    # exterior operations

    def wedge(self, other: "AlgebroidForm") -> "AlgebroidForm":
        """Graded-commutative exterior product."""
        if self.rank != other.rank:
            raise FormError(f"rank mismatch: {self.rank} vs {other.rank}")
        degree = self.degree + other.degree
        out: dict[Index, Polynomial] = {}
        for ia, ca in self.components.items():
            sa = set(ia)
            for ib, cb in other.components.items():
                if sa & set(ib):
                    continue
                sign, merged = _merge_sign(ia, ib)
                coeff = ca * cb
                if sign < 0:
                    coeff = -coeff
                if merged in out:
                    out[merged] = out[merged] + coeff
                else:
                    out[merged] = coeff
        return AlgebroidForm(self.rank, degree, out)

    def contract_first(self, vector: Sequence[Polynomial]) -> "AlgebroidForm":
        """First-slot contraction with a frame vector of r coefficients.

        Component formula: (i_v w)_J = sum over a of v^a w_{aJ}, with the
        sign of moving a to the front of the stored increasing index.
        """
        if self.degree == 0:
            raise FormError("cannot contract a degree-0 form")
        if len(vector) != self.rank:
            raise FormError(
                f"vector has {len(vector)} components, expected {self.rank}"
            )
        out: dict[Index, Polynomial] = {}
        for idx, coeff in self.components.items():
            for j, a in enumerate(idx):
                term = vector[a] * coeff
                if j % 2 == 1:
                    term = -term
                key = idx[:j] + idx[j + 1 :]
                if key in out:
                    out[key] = out[key] + term
                else:
                    out[key] = term
        return AlgebroidForm(self.rank, self.degree - 1, out)

    # ------------------------------------------------------------------
    # printing

    def render(self) -> str:
        """Canonical text: coefficient then e^i1^e^i2..., terms joined by ' + '."""
        if not self.components:
            return "0"
        pieces: list[str] = []
        for idx in sorted(self.components):
            coeff = self.components[idx]
            cs = coeff.to_text()
            if len(coeff.terms) > 1:
                cs = f"({cs})"
            frame = "^".join(f"e^{i + 1}" for i in idx)
            if not frame:
                pieces.append(cs)
            elif cs == "1":
                pieces.append(frame)
            else:
                pieces.append(f"{cs}*{frame}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"AlgebroidForm(rank={self.rank}, degree={self.degree}, {self.render()!r})"


def _merge_sign(left: Index, right: Index) -> tuple[int, Index]:
    """Sign and sorted index for concatenating two disjoint increasing indices."""
    inversions = 0
    for a in left:
        for b in right:
            if a > b:
                inversions += 1
    merged = tuple(sorted(left + right))
    return (-1 if inversions % 2 else 1), merged
