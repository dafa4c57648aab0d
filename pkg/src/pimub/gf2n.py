"""Arithmetic in GF(2^n) with a trace-orthonormal (self-dual) basis.

Field elements are handled in two coordinate systems:

* *polynomial* coordinates: an integer whose binary digits are the
  coefficients of the residue polynomial modulo a fixed irreducible
  polynomial.  Used internally for multiplication.
* *self-dual* coordinates: the expansion over a basis ``theta_1..theta_n``
  satisfying ``tr(theta_i * theta_j) = delta_ij``.  This is the canonical
  public representation (:attr:`FieldElement.bits`), because it identifies
  field elements with n-bit strings, one bit per qubit.

Irreducible polynomials used (lowest-weight conventional choices, verified
at construction time):

    n=1  : x + 1
    n=2  : x^2 + x + 1
    n=3  : x^3 + x + 1
    n=4  : x^4 + x + 1
    n=5  : x^5 + x^2 + 1
    n=6  : x^6 + x + 1
    n=7  : x^7 + x^3 + 1
    n=8  : x^8 + x^4 + x^3 + x^2 + 1
    n=9  : x^9 + x^4 + 1
    n=10 : x^10 + x^3 + 1
    n=11 : x^11 + x^2 + 1
    n=12 : x^12 + x^6 + x^4 + x + 1
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContextMismatchError, UnsupportedFieldSizeError

MAX_N = 12

_IRREDUCIBLE: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
}


# ----------------------------------------------------------------------
# Polynomial arithmetic over GF(2) (integers as coefficient bitmasks)
# ----------------------------------------------------------------------

def _poly_deg(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, m: int) -> int:
    dm = _poly_deg(m)
    while a and _poly_deg(a) >= dm:
        a ^= m << (_poly_deg(a) - dm)
    return a


def _poly_mul(a: int, b: int) -> int:
    """Carry-less product of two coefficient bitmasks (no reduction)."""
    r = 0
    shift = 0
    while b:
        if b & 1:
            r ^= a << shift
        b >>= 1
        shift += 1
    return r


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1 .. deg(p)//2."""
    n = _poly_deg(p)
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _poly_mod(p, q) == 0:
                return False
    return True


# ----------------------------------------------------------------------
# Self-dual basis construction
# ----------------------------------------------------------------------

def _selfdual_basis(n: int, poly: int, trace) -> tuple[int, ...]:
    """Orthonormalize the trace form tr(xy) by symmetric congruence reduction.

    The trace form is symmetric, nondegenerate and non-alternating (the
    quadratic value tr(x^2) = tr(x) is a nonzero linear functional), so an
    orthonormal basis exists.  We grow one greedily; when the residual form
    turns alternating we trade the last accepted vector ``w`` and a
    hyperbolic pair ``u1, u2`` for the orthonormal triple
    ``{w+u1, w+u2, w+u1+u2}``.

    Vectors are polynomial-coordinate bitmasks; the search order over spans
    is by increasing coefficient mask, which makes the result deterministic.
    """

    def form(x: int, y: int) -> int:
        return trace(_poly_mod(_poly_mul(x, y), poly))

    def complement_basis(accepted: list[int]) -> list[int]:
        # Gaussian elimination: basis of {u : form(u, r) = 0 for all accepted r}.
        gens = [1 << j for j in range(n)]
        for r in accepted:
            hot = [g for g in gens if form(g, r) == 1]
            cold = [g for g in gens if form(g, r) == 0]
            if hot:
                pivot = hot[0]
                gens = cold + [g ^ pivot for g in hot[1:]]
        return sorted(gens)

    def span(gens: list[int]):
        for mask in range(1, 1 << len(gens)):
            v = 0
            for j, g in enumerate(gens):
                if mask >> j & 1:
                    v ^= g
            yield v

    basis: list[int] = []
    while len(basis) < n:
        pending = complement_basis(basis)
        unit = next((v for v in span(pending) if form(v, v) == 1), None)
        if unit is not None:
            basis.append(unit)
            continue
        # Residual form alternating: find a hyperbolic pair and repair.
        pair = next(
            (u1, u2)
            for u1 in span(pending)
            for u2 in span(pending)
            if form(u1, u2) == 1
        )
        w = basis.pop()
        u1, u2 = pair
        basis.extend([w ^ u1, w ^ u2, w ^ u1 ^ u2])
    return tuple(basis)


# ----------------------------------------------------------------------
# Field context and elements
# ----------------------------------------------------------------------

class Field:
    """The algebra of GF(2^n): multiplication, trace, self-dual labeling.

    Immutable after construction; all operations are pure functions, safe
    for unrestricted concurrent use.
    """

    def __init__(self, n: int) -> None:
        if not isinstance(n, int) or not 1 <= n <= MAX_N:
            raise UnsupportedFieldSizeError(
                f"n must be an integer in 1..{MAX_N}, got {n!r}"
            )
        self.n = n
        self.size = 1 << n
        self.poly = _IRREDUCIBLE[n]
        if not is_irreducible(self.poly):
            raise AssertionError(f"polynomial table entry for n={n} is reducible")

        # Trace of every element in polynomial coordinates: tr(x) = sum x^(2^i).
        trace_table = []
        for x in range(self.size):
            t, y = x, x
            for _ in range(n - 1):
                y = self._mul_poly(y, y)
                t ^= y
            if t not in (0, 1):
                raise AssertionError("trace landed outside the base field")
            trace_table.append(t)
        self._trace_poly = tuple(trace_table)

        self.selfdual_basis = _selfdual_basis(n, self.poly, self.trace_poly)
        gram_ok = all(
            self.trace_poly(self._mul_poly(a, b)) == (i == j)
            for i, a in enumerate(self.selfdual_basis)
            for j, b in enumerate(self.selfdual_basis)
        )
        if not gram_ok:
            raise AssertionError("self-dual basis failed the Gram identity")

        # Coordinate conversion tables (self-dual bits <-> polynomial mask).
        sd_to_poly = []
        for bits in range(self.size):
            x = 0
            for i in range(n):
                if bits >> i & 1:
                    x ^= self.selfdual_basis[i]
            sd_to_poly.append(x)
        self._sd_to_poly = tuple(sd_to_poly)
        poly_to_sd = [0] * self.size
        for bits, x in enumerate(sd_to_poly):
            poly_to_sd[x] = bits
        self._poly_to_sd = tuple(poly_to_sd)
        if sorted(sd_to_poly) != list(range(self.size)):
            raise AssertionError("self-dual basis does not span the field")

    # -- raw polynomial-coordinate helpers ------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        return _poly_mod(_poly_mul(a, b), self.poly)

    def trace_poly(self, x: int) -> int:
        """Trace Z_2 value of an element given in polynomial coordinates."""
        return self._trace_poly[x]

    # -- element constructors -------------------------------------------

    def element(self, bits: int) -> "FieldElement":
        """Element from self-dual coordinates (bit i-1 is the theta_i coefficient)."""
        if not 0 <= bits < self.size:
            raise ValueError(f"bits out of range for n={self.n}: {bits}")
        return FieldElement(bits, self)

    def from_poly(self, mask: int) -> "FieldElement":
        return FieldElement(self._poly_to_sd[mask], self)

    def from_index(self, index: int) -> "FieldElement":
        """Element whose computational-basis index is ``index`` (qubit 1 = MSB)."""
        return self.element(self.bits_from_index(index))

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return self.from_poly(1)

    def elements(self) -> list["FieldElement"]:
        """All 2^n elements ordered by self-dual bits."""
        return [FieldElement(b, self) for b in range(self.size)]

    # -- index convention ------------------------------------------------

    def index_from_bits(self, bits: int) -> int:
        # qubit i carries self-dual coordinate n_i; qubit 1 is the MSB.
        return int(f"{bits:0{self.n}b}"[::-1], 2)

    def bits_from_index(self, index: int) -> int:
        return self.index_from_bits(index)  # bit reversal is an involution

    # -- equality / export -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.n, self.poly) == (other.n, other.poly)

    def __hash__(self) -> int:
        return hash((self.n, self.poly))

    def __repr__(self) -> str:
        return f"Field(n={self.n}, poly={bin(self.poly)})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "irreducible_poly": self.poly,
            "selfdual_basis": list(self.selfdual_basis),
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class FieldElement:
    """A GF(2^n) element carrying its self-dual coordinates.

    ``bits`` packs the coordinates ``(n_1 .. n_n)`` with ``theta_i`` at bit
    position ``i - 1``.  Addition is bitwise XOR; multiplication is delegated
    to the parent field's polynomial arithmetic.
    """

    bits: int
    field: Field

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise ContextMismatchError(
                f"elements from different fields: {self.field!r} vs {other.field!r}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.bits ^ other.bits, self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        f = self.field
        prod = f._mul_poly(f._sd_to_poly[self.bits], f._sd_to_poly[other.bits])
        return FieldElement(f._poly_to_sd[prod], f)

    def square(self) -> "FieldElement":
        return self * self

    def trace(self) -> int:
        return self.field.trace_poly(self.field._sd_to_poly[self.bits])

    @property
    def weight(self) -> int:
        """Hamming weight of the self-dual coordinates."""
        return self.bits.bit_count()

    @property
    def index(self) -> int:
        """Computational-basis index (qubit 1 = most significant bit)."""
        return self.field.index_from_bits(self.bits)

    @property
    def poly(self) -> int:
        """Polynomial-coordinate bitmask."""
        return self.field._sd_to_poly[self.bits]

    def coeffs(self) -> tuple[int, ...]:
        """Self-dual coordinates as a tuple (n_1, ..., n_n)."""
        return tuple(self.bits >> i & 1 for i in range(self.field.n))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.bits == other.bits
            and self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.bits, self.field.n, self.field.poly))

    def __repr__(self) -> str:
        return f"FieldElement(bits={self.bits:#0{self.field.n + 2}b}, n={self.field.n})"


def element_from_coeffs(field: Field, coeffs) -> FieldElement:
    """Element from an iterable of self-dual coordinates (n_1, ..., n_n)."""
    coeffs = list(coeffs)
    if len(coeffs) != field.n or any(c not in (0, 1) for c in coeffs):
        raise ValueError(f"need {field.n} binary coordinates, got {coeffs}")
    bits = sum(c << i for i, c in enumerate(coeffs))
    return field.element(bits)


@lru_cache(maxsize=None)
def make_field(n: int) -> Field:
    """Construct (and cache) the GF(2^n) context with a verified self-dual basis."""
    return Field(n)
