"""Layered CNOT circuits: representation, simulation, verification, merging.

Conventions used everywhere:
  * wire indices are 0-based;
  * layer i of a circuit is the i-th linear map applied, so the circuit's
    matrix is R_d ... R_2 R_1 (left-multiplication);
  * a gate (c, t) adds row c to row t, i.e. the map I + 1_{t,c};
  * ancillae are the wires past ``data``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DimensionMismatch, MalformedLayer, WireCollision
from .f2 import F2Matrix, _extract_cols, _nwords


class CnotGate(NamedTuple):
    control: int
    target: int


class Layer:
    """One parallel step: a set of CNOT gates on pairwise-disjoint wires.

    ``pairs`` keeps construction order; comparisons and text output use a
    lazily computed canonical (control, target)-sorted form.
    """

    __slots__ = ("pairs", "_canon")

    def __init__(self, gates, _trusted: np.ndarray | None = None):
        self._canon = None
        if _trusted is not None:
            self.pairs = _trusted
            return
        arr = np.asarray(list(gates) if not isinstance(gates, np.ndarray) else gates,
                         dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if (arr < 0).any():
                raise MalformedLayer("negative wire index")
            if (arr[:, 0] == arr[:, 1]).any():
                raise MalformedLayer("gate with control == target")
            flat = arr.ravel()
            if np.unique(flat).size != flat.size:
                raise MalformedLayer("gates share a wire")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.pairs = arr

    def canonical(self) -> np.ndarray:
        if self._canon is None:
            arr = self.pairs
            order = np.lexsort((arr[:, 1], arr[:, 0]))
            if np.array_equal(order, np.arange(arr.shape[0])):
                self._canon = arr
            else:
                self._canon = np.ascontiguousarray(arr[order])
        return self._canon

    @property
    def gates(self) -> tuple[CnotGate, ...]:
        return tuple(CnotGate(int(c), int(t)) for c, t in self.canonical())

    def wires(self) -> np.ndarray:
        return self.pairs.ravel()

    def transposed(self) -> "Layer":
        return Layer(self.pairs[:, ::-1])

    def __len__(self) -> int:
        return self.pairs.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Layer) and np.array_equal(self.canonical(), other.canonical())

    def __repr__(self) -> str:
        return "Layer(" + " ".join(f"{c}>{t}" for c, t in self.canonical()) + ")"


def trusted_layer(arr: np.ndarray) -> Layer:
    """Layer from a gate array the builder already knows to be disjoint
    (simulation-level verification still guards against builder bugs)."""
    if arr.dtype != np.int64:
        arr = arr.astype(np.int64)
    arr.setflags(write=False)
    return Layer((), _trusted=arr)


def _as_layers(layers: Iterable) -> tuple[Layer, ...]:
    out = []
    for l in layers:
        if not isinstance(l, Layer):
            l = Layer(l)
        if len(l):
            out.append(l)
    return tuple(out)


class Circuit:
    """Ordered list of layers over ``wires`` wires, the first ``data`` of
    which are data wires; the rest are ancillae required to restore to 0."""

    __slots__ = ("wires", "data", "layers")

    def __init__(self, wires: int, data: int, layers: Iterable = ()):
        if wires < 1 or not (1 <= data <= wires):
            raise DimensionMismatch(f"bad wire counts {wires}/{data}")
        self.wires = wires
        self.data = data
        self.layers = _as_layers(layers)
        for l in self.layers:
            if len(l) and int(l.pairs.max()) >= wires:
                raise MalformedLayer("gate outside wire range")

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def size(self) -> int:
        return sum(len(l) for l in self.layers)

    @property
    def ancillae(self) -> int:
        return self.wires - self.data

    def concat(self, other: "Circuit") -> "Circuit":
        if other.wires != self.wires or other.data != self.data:
            raise DimensionMismatch("concat over different wire counts")
        return Circuit(self.wires, self.data, self.layers + other.layers)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.wires == other.wires
            and self.data == other.data
            and self.layers == other.layers
        )

    def __repr__(self) -> str:
        return f"Circuit(wires={self.wires}, data={self.data}, depth={self.depth}, size={self.size})"


# ----------------------------------------------------------------------
# simulation
# ----------------------------------------------------------------------


def simulate_to_matrix(c: Circuit) -> F2Matrix:
    """The circuit as an element of GL(wires, 2).

    Applies each gate as "add row control to row target" to the identity,
    layer by layer, which realises the product R_d ... R_1.
    """
    n = c.wires
    w = F2Matrix.identity(n).words.copy()
    for layer in c.layers:
        p = layer.pairs
        w[p[:, 1]] ^= w[p[:, 0]]
    return F2Matrix(n, n, w)


def apply_to_bits(c: Circuit, bits) -> np.ndarray:
    """Run the circuit on one assignment of wire values (vector simulation)."""
    v = np.asarray(bits, dtype=np.uint8).copy()
    if v.shape != (c.wires,):
        raise DimensionMismatch("bit vector length != wires")
    for layer in c.layers:
        p = layer.pairs
        v[p[:, 1]] ^= v[p[:, 0]]
    return v


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    top_left_match: bool
    ancilla_restored: bool


def verify_implements(c: Circuit, m: F2Matrix) -> VerifyReport:
    """Check that the circuit implements ``m`` on its data wires.

    ok iff the top-left data block of the simulated matrix equals ``m`` and
    the bottom-left block is zero (ancillae restored for every data input).
    The remaining blocks are unconstrained, so only the first n columns of
    the circuit matrix are simulated.
    """
    n = m.rows
    if m.cols != n or c.data != n:
        raise DimensionMismatch("matrix size does not match data wire count")
    w = np.zeros((c.wires, _nwords(n)), dtype=np.uint64)
    w[:n] = F2Matrix.identity(n).words
    for layer in c.layers:
        p = layer.pairs
        w[p[:, 1]] ^= w[p[:, 0]]
    top_left = np.array_equal(w[:n], m.words)
    restored = not w[n:].any()
    return VerifyReport(top_left and restored, top_left, restored)


# ----------------------------------------------------------------------
# schedule algebra
# ----------------------------------------------------------------------


def invert_circuit(c: Circuit) -> Circuit:
    """Reverse the layer order; each layer is an involution so this is the
    inverse circuit."""
    return Circuit(c.wires, c.data, tuple(reversed(c.layers)))


def merge_independent_schedules(a: Circuit, b: Circuit) -> Circuit:
    """Overlay two circuits on disjoint wire sets layer-by-layer.

    Layer k of the result is the union of layer k of both inputs, so the
    depth is max(depth a, depth b).
    """
    if a.wires != b.wires:
        raise DimensionMismatch("merging circuits with different wire counts")
    wa = np.unique(np.concatenate([l.wires() for l in a.layers])) if a.layers else np.empty(0, int)
    wb = np.unique(np.concatenate([l.wires() for l in b.layers])) if b.layers else np.empty(0, int)
    if np.intersect1d(wa, wb).size:
        raise WireCollision("schedules touch overlapping wires")
    layers = []
    for i in range(max(a.depth, b.depth)):
        parts = []
        if i < a.depth:
            parts.append(a.layers[i].pairs)
        if i < b.depth:
            parts.append(b.layers[i].pairs)
        layers.append(Layer(np.concatenate(parts)))
    return Circuit(a.wires, min(a.data, b.data), layers)


# ----------------------------------------------------------------------
# text format: header then one "c>t c>t ..." line per layer
# ----------------------------------------------------------------------


def format_circuit(c: Circuit) -> str:
    lines = [f"CNOTC v1 wires={c.wires} data={c.data}"]
    for layer in c.layers:
        lines.append(" ".join(f"{ctl}>{tgt}" for ctl, tgt in layer.canonical()))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty circuit file")
    head = lines[0].split()
    if len(head) < 3 or head[0] != "CNOTC" or head[1] != "v1":
        raise ValueError(f"bad header: {lines[0]!r}")
    fields = {}
    for part in head[2:]:
        k, _, v = part.partition("=")
        fields[k] = v
    if "wires" not in fields or "data" not in fields:
        raise ValueError(f"bad header: {lines[0]!r}")
    wires, data = int(fields["wires"]), int(fields["data"])
    layers = []
    for ln in lines[1:]:
        gates = []
        for tok in ln.split():
            cs, _, ts = tok.partition(">")
            gates.append((int(cs), int(ts)))
        layers.append(Layer(gates))
    return Circuit(wires, data, layers)
