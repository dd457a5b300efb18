"""Prime-field arithmetic on bit-packed vectors.

Digits are stored ``bits`` per field inside ``uint64`` words (3 bits for
q = 5 and q = 7), so a weight is one OR-fold plus a popcount per word.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

_PRIMES = (2, 3, 5, 7)


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    q: int

    def __post_init__(self):
        if self.q not in _PRIMES:
            raise FieldError(f"q must be a prime in {_PRIMES}, got {self.q}")

    @property
    def bits(self) -> int:
        return max(1, (self.q - 1).bit_length())

    @property
    def per_word(self) -> int:
        return 64 // self.bits

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.q)

    @cached_property
    def inv_table(self) -> np.ndarray:
        t = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            t[a] = pow(a, -1, self.q)
        return t

    @cached_property
    def primitive_root(self) -> int:
        """Smallest generator of the multiplicative group (2 for q = 5)."""
        if self.q == 2:
            return 1
        for g in range(2, self.q):
            if len({pow(g, e, self.q) for e in range(1, self.q)}) == self.q - 1:
                return g
        raise AssertionError("unreachable")  # pragma: no cover

    @cached_property
    def _low_mask(self) -> np.uint64:
        m = 0
        for i in range(self.per_word):
            m |= 1 << (i * self.bits)
        return np.uint64(m)


def pack_digits(field: FieldSpec, digits) -> np.ndarray:
    d = np.asarray(digits, dtype=np.uint64).ravel()
    per, bits = field.per_word, field.bits
    nwords = max(1, -(-d.size // per))
    padded = np.zeros(nwords * per, dtype=np.uint64)
    padded[: d.size] = d
    shifts = (np.arange(per, dtype=np.uint64) * np.uint64(bits))[None, :]
    return np.bitwise_or.reduce(padded.reshape(nwords, per) << shifts, axis=1)


def unpack_words(field: FieldSpec, words: np.ndarray, length: int) -> np.ndarray:
    per, bits = field.per_word, field.bits
    shifts = (np.arange(per, dtype=np.uint64) * np.uint64(bits))[None, :]
    mask = np.uint64((1 << bits) - 1)
    d = (words[:, None] >> shifts) & mask
    return d.ravel()[:length].astype(np.int8)


class GFVec:
    """Immutable vector over F_q with packed storage."""

    __slots__ = ("field", "len", "words")

    def __init__(self, field: FieldSpec, digits):
        d = np.asarray(digits, dtype=np.int64).ravel()
        if d.size and (d.min() < 0 or d.max() >= field.q):
            d = d % field.q
        self.field = field
        self.len = int(d.size)
        w = pack_digits(field, d)
        w.setflags(write=False)
        self.words = w

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> "GFVec":
        return cls(field, np.zeros(n, dtype=np.int8))

    @classmethod
    def from_string(cls, field: FieldSpec, s: str) -> "GFVec":
        s = s.strip()
        if not s or not s.isdigit() or any(int(c) >= field.q for c in s):
            raise FieldError(f"not a digit string over F_{field.q}: {s!r}")
        return cls(field, [int(c) for c in s])

    @property
    def digits(self) -> np.ndarray:
        return unpack_words(self.field, self.words, self.len)

    def __len__(self):
        return self.len

    def __str__(self):
        return "".join(map(str, self.digits.tolist()))

    def __repr__(self):
        return f"GFVec(q={self.field.q}, '{self}')"

    def __eq__(self, other):
        if not isinstance(other, GFVec):
            return NotImplemented
        return (
            self.field == other.field
            and self.len == other.len
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self):
        return hash((self.field.q, self.len, self.words.tobytes()))

    def __mul__(self, lam: int) -> "GFVec":
        return GFVec(self.field, (self.digits.astype(np.int64) * int(lam)) % self.field.q)

    __rmul__ = __mul__


def weight(v: GFVec) -> int:
    bits = v.field.bits
    folded = v.words
    for s in range(1, bits):
        folded = folded | (v.words >> np.uint64(s))
    return int(np.bitwise_count(folded & v.field._low_mask).sum())


def weight_reference(v: GFVec) -> int:
    """Digit-by-digit count; oracle for :func:`weight`."""
    return sum(1 for x in str(v) if x != "0")


def _check_compatible(v: GFVec, w: GFVec) -> None:
    if v.field != w.field:
        raise FieldError(f"field mismatch: F_{v.field.q} vs F_{w.field.q}")
    if v.len != w.len:
        raise FieldError(f"length mismatch: {v.len} vs {w.len}")


def add_scaled(v: GFVec, w: GFVec, lam: int) -> GFVec:
    """Return v + lam * w."""
    _check_compatible(v, w)
    q = v.field.q
    a = v.digits.astype(np.int64)
    b = w.digits.astype(np.int64)
    return GFVec(v.field, (a + (int(lam) % q) * b) % q)


def scalar_multiples(v: GFVec) -> list[GFVec]:
    return [v * lam for lam in range(1, v.field.q)]
