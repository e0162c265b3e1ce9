"""Monomial orders and their packed-integer encoding.

Every supported order is a product of blocks, each ordered by ``lex`` or
``degrevlex``.  Within a block the order is realised by a vector of
non-negative linear forms in the exponents, compared lexicographically:

* lex:        (e_1, ..., e_n)
* degrevlex:  (deg, e_1+...+e_{n-1}, ..., e_1+e_2, e_1)

Packing these forms into one Python int (``FIELD_BITS`` per form, most
significant first) turns monomial comparison into int comparison and
monomial multiplication into int addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

FIELD_BITS = 32
_MASK = (1 << FIELD_BITS) - 1
_KINDS = ("lex", "degrevlex")


@dataclass(frozen=True)
class MonomialOrder:
    """Block order; ``blocks`` holds (size, kind) pairs, size ``None`` = remaining vars."""

    blocks: tuple = ((None, "degrevlex"),)

    def __post_init__(self):
        sizes = [s for s, _ in self.blocks]
        if any(k not in _KINDS for _, k in self.blocks):
            raise ValueError(f"unknown block kind in {self.blocks}")
        if sizes.count(None) > 1 or (None in sizes and sizes[-1] is not None):
            raise ValueError("only the last block may take the remaining variables")

    @classmethod
    def lex(cls) -> MonomialOrder:
        return cls(((None, "lex"),))

    @classmethod
    def degrevlex(cls) -> MonomialOrder:
        return cls(((None, "degrevlex"),))

    @classmethod
    def block(cls, elim_block_size: int, inner: Sequence[str] = ("degrevlex", "degrevlex")) -> MonomialOrder:
        """Elimination order: the first ``elim_block_size`` variables dominate."""
        first, rest = inner
        return cls(((elim_block_size, first), (None, rest)))

    @property
    def kind(self) -> str:
        if len(self.blocks) == 1:
            return self.blocks[0][1]
        return "block"

    def resolved(self, nvars: int) -> list[tuple[int, int, str]]:
        """(start, size, kind) for each block, for a ring with ``nvars`` variables."""
        out = []
        start = 0
        for size, kind in self.blocks:
            n = nvars - start if size is None else size
            if n < 0 or start + n > nvars:
                raise ValueError(f"order {self} does not fit {nvars} variables")
            if n:
                out.append((start, n, kind))
            start += n
        if start != nvars:
            # an order without a trailing open block orders the rest by degrevlex
            out.append((start, nvars - start, "degrevlex"))
        return out

    def __str__(self) -> str:
        if len(self.blocks) == 1:
            return self.blocks[0][1]
        return "block(" + ", ".join(f"{s if s is not None else '*'}:{k}" for s, k in self.blocks) + ")"

    def sort_key(self, exp: Sequence[int]):
        """Plain tuple key for an exponent vector (slow path, for tests and display)."""
        key = []
        for start, n, kind in self.resolved(len(exp)):
            block = exp[start:start + n]
            if kind == "lex":
                key.extend(block)
            else:
                prefix = []
                s = 0
                for e in block:
                    s += e
                    prefix.append(s)
                key.append(s)
                key.extend(reversed(prefix[:-1]))
        return tuple(key)


class Packer:
    """Encodes exponent vectors for one (order, nvars) pair."""

    def __init__(self, order: MonomialOrder, nvars: int):
        self.order = order
        self.nvars = nvars
        self.layout = order.resolved(nvars)
        self.nfields = nvars
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(nvars))
        self._shifts = [FIELD_BITS * (nvars - 1 - j) for j in range(nvars)]

    def key(self, exp: Sequence[int]) -> int:
        k = 0
        for start, n, kind in self.layout:
            block = exp[start:start + n]
            if kind == "lex":
                for e in block:
                    k = (k << FIELD_BITS) | e
            else:
                prefix = []
                s = 0
                for e in block:
                    s += e
                    prefix.append(s)
                k = (k << FIELD_BITS) | s
                for p in reversed(prefix[:-1]):
                    k = (k << FIELD_BITS) | p
        return k

    def pack(self, exp: Sequence[int]) -> int:
        e = 0
        for i, x in enumerate(exp):
            e |= x << (FIELD_BITS * i)
        return e

    def unpack(self, packed: int) -> tuple:
        return tuple((packed >> (FIELD_BITS * i)) & _MASK for i in range(self.nvars))

    def decode(self, key: int) -> tuple:
        """Exponent vector from an order key."""
        fields = [(key >> s) & _MASK for s in self._shifts]
        exp = []
        pos = 0
        for start, n, kind in self.layout:
            f = fields[pos:pos + n]
            pos += n
            if kind == "lex":
                exp.extend(f)
            else:
                # f = [deg, p_{n-1}, ..., p_1]
                prefix = list(reversed(f[1:])) + [f[0]]
                prev = 0
                for p in prefix:
                    exp.append(p - prev)
                    prev = p
        return tuple(exp)

    def divides(self, a: int, b: int) -> bool:
        """Packed-exponent divisibility a | b."""
        g = self.guard
        return ((b | g) - a) & g == g
