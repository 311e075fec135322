"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial lives in a fixed ring given by an ordered tuple of variable
names (for instance ``("x1", "x2", "t")``).  It is stored sparsely as a map
from exponent tuples to nonzero ``Fraction`` coefficients, so equality of
canonical forms is exact structural equality and identity checks never
depend on floating point.

The distinguished time variable is the name ``"t"``; it is an ordinary ring
variable, and "time dependent" simply means that ``t`` occurs.

Text input uses the following grammar (whitespace insignificant, no
implicit multiplication):

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | ident | '(' expr ')'
    rational := int ('/' uint)?
    ident    := letter (letter|digit)*

All operations are pure and values are treated as immutable after
construction, so polynomials can be shared freely.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]

TIME = "t"

_DEFAULT_DEGREE_CAP = 16
_degree_cap = _DEFAULT_DEGREE_CAP


class PolyError(ValueError):
    """Base class for polynomial errors."""


class PolyParseError(PolyError):
    """Syntax error in polynomial text, with the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"syntax error at offset {offset}: {message}")
        self.offset = offset


class UnknownVariableError(PolyError):
    """An identifier that is not a variable of the ring."""

    def __init__(self, name: str, offset: int | None = None):
        at = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown variable '{name}'{at}")
        self.name = name
        self.offset = offset


class DegreeCapError(PolyError):
    """Total degree of a result exceeded the configured cap."""


def set_degree_cap(cap: int) -> None:
    """Set the global total-degree cap (default 16).

    Exceeding the cap in a product or power raises DegreeCapError instead of
    silently truncating.
    """
    global _degree_cap
    if cap < 1:
        raise ValueError("degree cap must be >= 1")
    _degree_cap = cap


def degree_cap() -> int:
    return _degree_cap


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, float):
        raise TypeError("float coefficients are not allowed in exact polynomials")
    return Fraction(value)


def merge_vars(*rings: Sequence[str]) -> tuple[str, ...]:
    """Union of rings, keeping the order of first appearance."""
    out: list[str] = []
    for ring in rings:
        for v in ring:
            if v not in out:
                out.append(v)
    return tuple(out)


class Polynomial:
    """Sparse exact polynomial in a fixed ordered ring of named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponents, Scalar]):
        vt = tuple(vars)
        if len(set(vt)) != len(vt):
            raise PolyError(f"duplicate variable names in ring {vt}")
        canon: dict[Exponents, Fraction] = {}
        for exps, coeff in terms.items():
            if len(exps) != len(vt):
                raise PolyError(
                    f"exponent tuple {exps} does not match ring of {len(vt)} variables"
                )
            c = _as_fraction(coeff)
            if c != 0:
                canon[tuple(exps)] = c
        object.__setattr__(self, "vars", vt)
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Polynomial is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Polynomial":
        return cls(vars, {})

    @classmethod
    def constant(cls, vars: Sequence[str], value: Scalar) -> "Polynomial":
        return cls(vars, {(0,) * len(tuple(vars)): value})

    @classmethod
    def variable(cls, vars: Sequence[str], name: str) -> "Polynomial":
        vt = tuple(vars)
        if name not in vt:
            raise UnknownVariableError(name)
        exps = tuple(1 if v == name else 0 for v in vt)
        return cls(vt, {exps: 1})

    # ------------------------------------------------------------------
    # structure queries

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        return max((sum(exps) for exps in self.terms), default=0)

    def variables_used(self) -> set[str]:
        used: set[str] = set()
        for exps in self.terms:
            for v, e in zip(self.vars, exps):
                if e > 0:
                    used.add(v)
        return used

    def uses(self, name: str) -> bool:
        return name in self.variables_used()

    # ------------------------------------------------------------------
    # ring embedding and comparison

    def with_vars(self, new_vars: Sequence[str]) -> "Polynomial":
        """Embed into a ring that contains every variable actually used."""
        nv = tuple(new_vars)
        if nv == self.vars:
            return self
        missing = self.variables_used() - set(nv)
        if missing:
            raise UnknownVariableError(sorted(missing)[0])
        pos = {v: i for i, v in enumerate(nv)}
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            new_exps = [0] * len(nv)
            for v, e in zip(self.vars, exps):
                if e:
                    new_exps[pos[v]] = e
            out[tuple(new_exps)] = coeff
        return Polynomial(nv, out)

    def _require_same_ring(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise PolyError(f"ring mismatch: {self.vars} vs {other.vars}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):  # pragma: no cover - not used as dict keys
        return hash((self.vars, frozenset(self.terms.items())))

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other: "Polynomial | Scalar") -> "Polynomial":
        other = self._coerce(other)
        self._require_same_ring(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return Polynomial(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial | Scalar") -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other: "Polynomial | Scalar") -> "Polynomial":
        other = self._coerce(other)
        self._require_same_ring(other)
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                out[exps] = out.get(exps, Fraction(0)) + ca * cb
        result = Polynomial(self.vars, out)
        deg = result.total_degree()
        if deg > _degree_cap:
            raise DegreeCapError(
                f"total degree {deg} exceeds the configured cap {_degree_cap}"
            )
        return result

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise PolyError("negative exponents are not supported")
        result = Polynomial.constant(self.vars, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def _coerce(self, value: "Polynomial | Scalar") -> "Polynomial":
        if isinstance(value, Polynomial):
            return value
        return Polynomial.constant(self.vars, value)

    # ------------------------------------------------------------------
    # calculus

    def diff(self, name: str) -> "Polynomial":
        """Formal partial derivative with respect to a ring variable."""
        if name not in self.vars:
            raise UnknownVariableError(name)
        i = self.vars.index(name)
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = list(exps)
            new[i] = e - 1
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + coeff * e
        return Polynomial(self.vars, out)

    def subs(
        self,
        mapping: Mapping[str, "Polynomial | Scalar"],
        *,
        vars: Sequence[str] | None = None,
    ) -> "Polynomial":
        """Substitute polynomials for variables.

        Every variable that actually occurs must be mapped.  All polynomial
        images must share one ring, which becomes the ring of the result
        (``vars`` overrides this when the mapping carries no polynomial, for
        instance when substituting constants into constants).
        """
        occurring = self.variables_used()
        missing = occurring - set(mapping)
        if missing:
            raise UnknownVariableError(sorted(missing)[0])
        target: tuple[str, ...] | None = tuple(vars) if vars is not None else None
        if target is None:
            for v in self.vars:
                img = mapping.get(v)
                if isinstance(img, Polynomial):
                    target = img.vars
                    break
        if target is None:
            raise PolyError("cannot infer result ring; pass vars=")
        images: dict[str, Polynomial] = {}
        for v in occurring:
            img = mapping[v]
            if not isinstance(img, Polynomial):
                img = Polynomial.constant(target, img)
            elif img.vars != target:
                img = img.with_vars(target)
            images[v] = img
        result = Polynomial.zero(target)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for v, e in zip(self.vars, exps):
                if e:
                    term = term * images[v] ** e
            result = result + term
        return result

    def eval(self, point: Mapping[str, Scalar | float]) -> Fraction | float:
        """Evaluate at a point, Horner style in each variable in turn.

        Exact (a Fraction) when every assigned value is exact.
        """
        values: list[Scalar | float] = []
        for v in self.vars:
            if v not in point:
                raise PolyError(f"missing assignment for variable '{v}'")
            values.append(point[v])
        result = _horner(self.terms, values, 0, len(self.vars))
        return result

    # ------------------------------------------------------------------
    # printing

    def to_text(self) -> str:
        """Canonical rendering; parse_poly(to_text(p), p.vars) == p."""
        if not self.terms:
            return "0"
        ordered = sorted(
            self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True
        )
        pieces: list[str] = []
        for i, (exps, coeff) in enumerate(ordered):
            factors = [
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(self.vars, exps)
                if e > 0
            ]
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if i == 0:
                if coeff < 0:
                    # the grammar has no leading unary minus, so fold the
                    # sign into the leading rational
                    body = (
                        str(coeff)
                        if not factors
                        else "*".join([str(-mag)] + factors)
                    )
                pieces.append(body)
            else:
                pieces.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.vars!r}, {self.to_text()!r})"


def _horner(
    terms: Mapping[Exponents, Fraction],
    values: Sequence[Scalar | float],
    index: int,
    nvars: int,
) -> Fraction | float:
    if not terms:
        return Fraction(0)
    if index == nvars:
        return terms[()]
    groups: dict[int, dict[Exponents, Fraction]] = {}
    for exps, coeff in terms.items():
        groups.setdefault(exps[0], {})[exps[1:]] = coeff
    top = max(groups)
    acc: Fraction | float = Fraction(0)
    value = values[index]
    for e in range(top, -1, -1):
        acc = acc * value
        if e in groups:
            acc = acc + _horner(groups[e], values, index + 1, nvars)
    return acc


# ----------------------------------------------------------------------
# calculus over the time variable


def integrate_t(p: Polynomial, lo: Scalar, hi: Scalar) -> Polynomial:
    """Exact integral of p over t in [lo, hi]; t is removed from the ring.

    If t does not occur in the ring the result is (hi - lo) * p.
    """
    lo_f, hi_f = _as_fraction(lo), _as_fraction(hi)
    if TIME not in p.vars:
        return (hi_f - lo_f) * p
    ti = p.vars.index(TIME)
    rest = tuple(v for v in p.vars if v != TIME)
    out: dict[Exponents, Fraction] = {}
    for exps, coeff in p.terms.items():
        k = exps[ti]
        weight = coeff * (hi_f ** (k + 1) - lo_f ** (k + 1)) / (k + 1)
        key = tuple(e for j, e in enumerate(exps) if j != ti)
        out[key] = out.get(key, Fraction(0)) + weight
    return Polynomial(rest, out)


def integrate_t01(p: Polynomial) -> Polynomial:
    """Exact integral of p over t in [0, 1]; t is removed from the ring."""
    return integrate_t(p, 0, 1)


# ----------------------------------------------------------------------
# parsing


def parse_poly(text: str, vars: Sequence[str]) -> Polynomial:
    """Parse text in the module grammar into a canonical polynomial.

    Raises PolyParseError with a byte offset on malformed input and
    UnknownVariableError when an identifier is not in ``vars``.
    """
    return _Parser(text, tuple(vars)).parse()


class _Parser:
    def __init__(self, text: str, vars: tuple[str, ...]):
        self.text = text
        self.vars = vars
        self.pos = 0

    def parse(self) -> Polynomial:
        self._skip_ws()
        result = self._expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise PolyParseError("unexpected trailing input", self.pos)
        return result

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self) -> Polynomial:
        result = self._term()
        while True:
            self._skip_ws()
            ch = self._peek()
            if ch == "+":
                self.pos += 1
                result = result + self._term()
            elif ch == "-":
                self.pos += 1
                result = result - self._term()
            else:
                return result

    def _term(self) -> Polynomial:
        result = self._factor()
        while True:
            self._skip_ws()
            if self._peek() == "*":
                self.pos += 1
                result = result * self._factor()
            else:
                return result

    def _factor(self) -> Polynomial:
        base = self._base()
        self._skip_ws()
        if self._peek() == "^":
            self.pos += 1
            self._skip_ws()
            exponent = self._uint()
            return base ** exponent
        return base

    def _base(self) -> Polynomial:
        self._skip_ws()
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            inner = self._expr()
            self._skip_ws()
            if self._peek() != ")":
                raise PolyParseError("expected ')'", self.pos)
            self.pos += 1
            return inner
        if ch.isalpha():
            return self._ident()
        if ch.isdigit() or ch == "-":
            return self._rational()
        raise PolyParseError("expected a rational, an identifier or '('", self.pos)

    def _ident(self) -> Polynomial:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        name = self.text[start : self.pos]
        if name not in self.vars:
            raise UnknownVariableError(name, start)
        return Polynomial.variable(self.vars, name)

    def _uint(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PolyParseError("expected digits", self.pos)
        return int(self.text[start : self.pos])

    def _rational(self) -> Polynomial:
        start = self.pos
        if self._peek() == "-":
            self.pos += 1
        if not self._peek().isdigit():
            raise PolyParseError("expected digits", self.pos)
        num = int(self.text[start : self._scan_digits()])
        if self._peek() == "/":
            self.pos += 1
            dstart = self.pos
            if not self._peek().isdigit():
                raise PolyParseError("expected digits after '/'", self.pos)
            den = int(self.text[dstart : self._scan_digits()])
            if den == 0:
                raise PolyParseError("zero denominator", dstart)
            return Polynomial.constant(self.vars, Fraction(num, den))
        return Polynomial.constant(self.vars, num)

    def _scan_digits(self) -> int:
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.pos


def coords(prefix: str, n: int) -> tuple[str, ...]:
    """Standard coordinate names prefix1 .. prefixN."""
    return tuple(f"{prefix}{i + 1}" for i in range(n))


def constants(vars: Sequence[str], values: Iterable[Scalar]) -> list[Polynomial]:
    """Promote a sequence of rationals to constant polynomials."""
    return [Polynomial.constant(vars, v) for v in values]
