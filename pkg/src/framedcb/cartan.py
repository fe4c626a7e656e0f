"""Symmetric Cartan data, weights given by their pairings, and framing."""

from __future__ import annotations

import functools
import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Node",
    "CartanDatum",
    "FramedDatum",
    "Weight",
    "cartan_type",
    "frame",
    "odot",
    "odot_iterated",
    "theta_lambda_weight",
]


@dataclass(frozen=True, order=True)
class Node:
    """A node ``base`` framed ``gen`` times; ``Node("i", 1)`` prints as ``i'``."""

    base: str
    gen: int = 0

    def __str__(self) -> str:
        return self.base + "'" * self.gen

    @classmethod
    def parse(cls, text: str) -> "Node":
        text = text.strip()
        stripped = text.rstrip("'")
        if not stripped:
            raise ValueError(f"bad node name {text!r}")
        return cls(stripped, len(text) - len(stripped))

    def framed(self, gen: int) -> "Node":
        return Node(self.base, gen)


@dataclass(frozen=True)
class CartanDatum:
    nodes: tuple
    pairing: tuple  # tuple of tuples, pairing[a][b] = nodes[a] . nodes[b]
    # Memo tables shared by the algebra modules. Entries are inserted only once
    # fully computed, so concurrent readers never observe partial values.
    memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        n = len(self.nodes)
        if len(set(self.nodes)) != n:
            raise ValueError("node names must be distinct")
        if len(self.pairing) != n or any(len(row) != n for row in self.pairing):
            raise ValueError("pairing matrix must be square of size len(nodes)")
        for a in range(n):
            if self.pairing[a][a] != 2:
                raise ValueError("diagonal entries i.i must equal 2")
            for b in range(n):
                if self.pairing[a][b] != self.pairing[b][a]:
                    raise ValueError("pairing matrix must be symmetric")
                if a != b and self.pairing[a][b] > 0:
                    raise ValueError("off-diagonal entries must be <= 0")

    @classmethod
    def build(cls, nodes: Iterable, matrix: Sequence[Sequence[int]]) -> "CartanDatum":
        ns = tuple(n if isinstance(n, Node) else Node.parse(str(n)) for n in nodes)
        return cls(ns, tuple(tuple(int(x) for x in row) for row in matrix))

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def index(self, node: "Node | str") -> int:
        if isinstance(node, str):
            node = Node.parse(node)
        return self.nodes.index(node)

    def dot(self, a: int, b: int) -> int:
        return self.pairing[a][b]

    def dot_vec(self, a: int, nu: Sequence[int]) -> int:
        """``i_a . nu`` for ``nu`` in Z[nodes] given as a coefficient tuple."""
        row = self.pairing[a]
        return sum(row[b] * nu[b] for b in range(len(nu)) if nu[b])

    def vec_dot(self, mu: Sequence[int], nu: Sequence[int]) -> int:
        return sum(mu[a] * self.dot_vec(a, nu) for a in range(len(mu)) if mu[a])

    def weight(self, pairings: "Mapping | Sequence[int]") -> "Weight":
        if isinstance(pairings, Mapping):
            vals = [0] * self.rank
            for k, x in pairings.items():
                vals[self.index(k)] = int(x)
            return Weight(self, tuple(vals))
        vals = tuple(int(x) for x in pairings)
        if len(vals) != self.rank:
            raise ValueError(f"expected {self.rank} pairings, got {len(vals)}")
        return Weight(self, vals)

    def zero_weight(self) -> "Weight":
        return Weight(self, (0,) * self.rank)

    def fingerprint(self) -> str:
        payload = ";".join(str(n) for n in self.nodes) + "|" + ";".join(
            ",".join(str(x) for x in row) for row in self.pairing
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def node_names(self) -> list:
        return [str(n) for n in self.nodes]

    def __str__(self) -> str:
        width = max(len(str(n)) for n in self.nodes) + 1
        head = " " * width + "".join(f"{str(n):>{width + 2}}" for n in self.nodes)
        rows = [head]
        for n, row in zip(self.nodes, self.pairing):
            rows.append(f"{str(n):>{width}}" + "".join(f"{x:>{width + 2}}" for x in row))
        return "\n".join(rows)


@dataclass(frozen=True)
class Weight:
    """A weight recorded by its pairings ``<i, lambda>`` with every node."""

    datum: CartanDatum = field(compare=True, repr=False)
    pairings: tuple

    def __getitem__(self, node: "int | Node | str") -> int:
        if isinstance(node, int):
            return self.pairings[node]
        return self.pairings[self.datum.index(node)]

    def is_dominant(self) -> bool:
        return all(x >= 0 for x in self.pairings)

    def pair_minus(self, a: int, nu: Sequence[int]) -> int:
        """``<i_a, lambda - nu>`` for ``nu`` in N[nodes]."""
        return self.pairings[a] - self.datum.dot_vec(a, nu)

    def pair_root(self, mu: Sequence[int], nu: Sequence[int] | None = None) -> int:
        """``<mu, lambda - nu>`` for ``mu`` in Z[nodes]."""
        total = 0
        for a, m in enumerate(mu):
            if m:
                total += m * (self.pairings[a] if nu is None else self.pair_minus(a, nu))
        return total

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.pairings) + ")"

    def label(self) -> str:
        return ",".join(str(x) for x in self.pairings)


@dataclass(frozen=True)
class FramedDatum:
    """``full`` extends ``base`` by one copy of the base nodes per framing generation."""

    base: CartanDatum
    full: CartanDatum
    tagging: tuple  # per full node: (base index, generation)

    @property
    def generations(self) -> int:
        return max(g for _, g in self.tagging)

    def frame_index(self, base_index: int, gen: int = 1) -> int:
        return self.tagging.index((base_index, gen))

    def base_indices(self) -> list:
        return [k for k, (_, g) in enumerate(self.tagging) if g == 0]

    def embed(self, nu: Sequence[int], gen: int = 0) -> tuple:
        """Place a base vector onto the nodes of one generation of the full datum."""
        out = [0] * self.full.rank
        for b, x in enumerate(nu):
            if x:
                out[self.frame_index(b, gen)] = x
        return tuple(out)


@functools.lru_cache(maxsize=None)
def frame(d: "CartanDatum | FramedDatum") -> FramedDatum:
    """Add a framing generation.

    A plain datum gains nodes ``i'`` with ``i.j' = -delta``, ``i'.j' = 2 delta``.
    A framed datum gains ``i''`` orthogonal to the earlier frame nodes.
    Results are cached, so framing equal data twice gives the same object.
    """
    if isinstance(d, CartanDatum):
        base = d
        nodes = list(base.nodes)
        tagging = [(k, 0) for k in range(base.rank)]
        old = [list(r) for r in base.pairing]
    else:
        base = d.base
        nodes = list(d.full.nodes)
        tagging = list(d.tagging)
        old = [list(r) for r in d.full.pairing]
    gen = max(g for _, g in tagging) + 1
    n_old = len(nodes)
    n_new = n_old + base.rank
    mat = [[0] * n_new for _ in range(n_new)]
    for a in range(n_old):
        for b in range(n_old):
            mat[a][b] = old[a][b]
    for k in range(base.rank):
        new = n_old + k
        nodes.append(base.nodes[k].framed(gen))
        tagging.append((k, gen))
        for a in range(n_old):
            b_idx, g = tagging[a]
            # frame nodes pair with base nodes only
            mat[a][new] = mat[new][a] = -1 if (g == 0 and b_idx == k) else 0
        for k2 in range(base.rank):
            mat[new][n_old + k2] = 2 if k == k2 else 0
    full = CartanDatum(tuple(nodes), tuple(tuple(r) for r in mat))
    return FramedDatum(base, full, tuple(tagging))


def odot_iterated(weights: Sequence[Weight], fd: FramedDatum) -> Weight:
    """Pairings of ``w0 (.) w1 (.) ...``: generation ``g`` nodes see ``weights[g]``."""
    if len(weights) - 1 > fd.generations:
        raise ValueError("more weights than framing generations")
    for w in weights:
        if w.datum != fd.base:
            raise ValueError("weights must live on the base datum")
        if not w.is_dominant():
            raise ValueError(f"weight {w} is not dominant")
    vals = []
    for b, g in fd.tagging:
        vals.append(weights[g].pairings[b] if g < len(weights) else 0)
    return Weight(fd.full, tuple(vals))


def odot(xi: Weight, lam: Weight, fd: FramedDatum) -> Weight:
    """The framed weight with ``<i, .> = <i, xi>`` and ``<i', .> = <i, lam>``."""
    return odot_iterated([xi, lam], fd)


def theta_lambda_weight(lam: Weight, fd: FramedDatum, gen: int = 1) -> tuple:
    """``|theta_lambda| = sum_i <i, lam> i'`` as a vector over the full nodes."""
    if not lam.is_dominant():
        raise ValueError(f"weight {lam} is not dominant")
    return fd.embed(lam.pairings, gen)


_BUILTIN = {
    "A1": (("i",), ((2,),)),
    "A2": (("i", "j"), ((2, -1), (-1, 2))),
    "A3": (("i", "j", "k"), ((2, -1, 0), (-1, 2, -1), (0, -1, 2))),
}


def cartan_type(name: str) -> CartanDatum:
    """Built-in data: ``A1`` (node ``i``), ``A2`` (nodes ``i, j``), ``A3``.

    The same instance is returned on every call so its memo tables are shared.
    """
    return _builtin(name.upper())


@functools.lru_cache(maxsize=None)
def _builtin(name: str) -> CartanDatum:
    try:
        nodes, mat = _BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown built-in Cartan type {name!r}; choose from {sorted(_BUILTIN)}") from None
    return CartanDatum.build(nodes, mat)
