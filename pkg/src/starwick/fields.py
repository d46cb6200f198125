"""Numeric specialization: sampled kernels, field values and quadrature.

A grid holds sample points of the underlying space together with the
kernel matrix ``K(x_i, x_j)``, the field samples ``phi(x_i)`` and a
numeric value for hbar.  Rational mode keeps everything exact; float
mode trades exactness for range.  All field-level operations factor
through the symbolic engine followed by substitution, which is also the
contract the tests pin down.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Poly, PropagatorSymbol
from .star import PropagatorMatrix, poisson_bracket, star2, star_tensor
from .wick import WickMonomialSpec, expectation_formula

Num = Fraction | float

_MODES = ("rational", "float")


def _decode_number(value, mode: str) -> Num:
    if mode == "float":
        return float(value)
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValueError(f"rational mode cannot hold {value!r}; use 'p/q' strings")


def _encode_number(value: Num, mode: str):
    if mode == "float":
        return float(value)
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else f"{value}"


@dataclass(frozen=True)
class KernelGrid:
    """Sampled kernel and field data over labeled points."""

    points: tuple[str, ...]
    kernel: tuple[tuple[Num, ...], ...]
    field: tuple[Num, ...]
    hbar: Num
    mode: str = "rational"
    symmetric: bool = False

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("sample point labels must be distinct")
        d = len(self.points)
        if len(self.kernel) != d or any(len(row) != d for row in self.kernel):
            raise ValueError("kernel must be square over the sample points")
        if len(self.field) != d:
            raise ValueError("one field value per sample point is required")
        if self.symmetric:
            for i in range(d):
                for j in range(d):
                    if self.kernel[i][j] != self.kernel[j][i]:
                        raise ValueError("grid declared symmetric but kernel is not")

    @property
    def size(self) -> int:
        return len(self.points)

    @classmethod
    def make(
        cls,
        points: Sequence[str],
        kernel: Sequence[Sequence],
        field: Sequence,
        hbar,
        mode: str = "rational",
        symmetric: bool = False,
    ) -> "KernelGrid":
        return cls(
            tuple(str(p) for p in points),
            tuple(tuple(_decode_number(v, mode) for v in row) for row in kernel),
            tuple(_decode_number(v, mode) for v in field),
            _decode_number(hbar, mode),
            mode,
            symmetric,
        )

    @classmethod
    def from_json(cls, text_or_data) -> "KernelGrid":
        data = json.loads(text_or_data) if isinstance(text_or_data, str) else text_or_data
        if not isinstance(data, dict):
            raise ValueError("grid JSON must be an object")
        missing = {"points", "kernel", "field"} - data.keys()
        if missing:
            raise ValueError(f"grid JSON missing keys: {sorted(missing)}")
        mode = data.get("mode", "rational")
        return cls.make(
            data["points"],
            data["kernel"],
            data["field"],
            data.get("hbar", 1),
            mode,
            bool(data.get("symmetric", False)),
        )

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "kernel": [[_encode_number(v, self.mode) for v in row] for row in self.kernel],
            "field": [_encode_number(v, self.mode) for v in self.field],
            "hbar": _encode_number(self.hbar, self.mode),
            "mode": self.mode,
        }

    def index(self, label: str) -> int:
        try:
            return self.points.index(label)
        except ValueError:
            raise ValueError(f"unknown sample point {label!r}") from None


def _coerce_result(value, mode: str) -> Num:
    return float(value) if mode == "float" else Fraction(value)


def specialize(
    p: Poly,
    grid: KernelGrid,
    family_bindings: Mapping[str, Sequence[Sequence[Num]]] | None = None,
) -> Num:
    """Substitute kernel values, field samples and hbar into a result.

    Symbols ``K[f;i,j]`` take the value ``binding[f][i][j]``; with no
    explicit bindings every family is read from the grid kernel.
    Variables take the field sample of their index, in every block.
    """
    d = grid.size

    def sym_value(sym: PropagatorSymbol):
        if family_bindings is None:
            matrix = grid.kernel
        elif sym.family in family_bindings:
            matrix = family_bindings[sym.family]
        else:
            raise ValueError(f"unbound propagator family {sym.family!r}")
        if sym.row > len(matrix) or sym.col > len(matrix[sym.row - 1]):
            raise ValueError(f"symbol {sym.text()} exceeds the bound kernel")
        return matrix[sym.row - 1][sym.col - 1]

    def var_value(block: int, index: int):
        if index > d:
            raise ValueError(f"variable x{index} exceeds the {d}-point grid")
        return grid.field[index - 1]

    return _coerce_result(p.evaluate(var_value, sym_value, grid.hbar), grid.mode)


def field_star(f: Poly, g: Poly, grid: KernelGrid, order: int | None = None) -> Num:
    """Star product of two densities at coincident sample points."""
    K = PropagatorMatrix.family("K", f.dim)
    return specialize(star2(f, g, K, order), grid)


def field_poisson(f: Poly, g: Poly, grid: KernelGrid) -> Num:
    """Field-level bracket: antisymmetrized kernel against both gradients."""
    K = PropagatorMatrix.family("K", f.dim)
    return specialize(poisson_bracket(f, g, K), grid)


def field_wick_power(index: int, power: int, grid: KernelGrid) -> Num:
    """Closed-form Wick power of the field sample at one point."""
    if not 1 <= index <= grid.size:
        raise ValueError(f"point index {index} out of range 1..{grid.size}")
    if power < 0:
        raise ValueError("power must be non-negative")
    diag = grid.kernel[index - 1][index - 1]
    phi = grid.field[index - 1]
    total = 0
    for k in range(power // 2 + 1):
        c = Fraction(
            math.factorial(power),
            2**k * math.factorial(k) * math.factorial(power - 2 * k),
        )
        total = total + c * grid.hbar**k * diag**k * phi ** (power - 2 * k)
    return _coerce_result(total, grid.mode)


def field_expectation(powers: Sequence[int], grid: KernelGrid) -> Num:
    """Expectation of a field Wick monomial on the grid kernel."""
    powers = tuple(int(p) for p in powers)
    d = len(powers)
    if d > grid.size:
        raise ValueError("more powers than sample points")
    spec = WickMonomialSpec(
        powers,
        PropagatorMatrix.family("K", d, zero_diagonal=True),
        PropagatorMatrix.family("K", d),
    )
    value = expectation_formula(spec)

    def sym_value(sym: PropagatorSymbol):
        return grid.kernel[sym.row - 1][sym.col - 1]

    return _coerce_result(value.evaluate(sym_value, grid.hbar), grid.mode)


@dataclass(frozen=True)
class QuadratureRule:
    """Weighted nodes; every node is a tuple of grid point labels."""

    nodes: tuple[tuple[str, ...], ...]
    weights: tuple[Num, ...]

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValueError("at least one node is required")
        if len(self.nodes) != len(self.weights):
            raise ValueError("one weight per node is required")
        if any(isinstance(w, float) and not math.isfinite(w) for w in self.weights):
            raise ValueError("weights must be finite")
        arity = len(self.nodes[0])
        if any(len(node) != arity for node in self.nodes):
            raise ValueError("all nodes must have the same arity")

    @property
    def arity(self) -> int:
        return len(self.nodes[0])

    @classmethod
    def all_tuples(cls, grid: KernelGrid, arity: int, weight: Num = 1) -> "QuadratureRule":
        """Uniform rule over every arity-tuple of grid points."""
        nodes = tuple(itertools.product(grid.points, repeat=arity))
        w = _decode_number(weight, grid.mode)
        return cls(nodes, tuple(w for _ in nodes))


def functional_star(
    f: Poly,
    g: Poly,
    rule: QuadratureRule,
    grid: KernelGrid,
    order: int | None = None,
) -> Num:
    """Double quadrature of the two-block star product over node pairs.

    For nodes ``s`` and ``t`` the integrand couples the factors through
    the cross-sampled kernel ``K(s_i, t_j)``, with the field evaluated at
    ``s`` inside ``f`` and at ``t`` inside ``g``.
    """
    if f.dim != g.dim:
        raise ValueError("densities must share a dimension")
    if rule.arity != f.dim:
        raise ValueError(
            f"rule nodes have arity {rule.arity}, densities use {f.dim} variables"
        )
    K = PropagatorMatrix.family("K", f.dim)
    symbolic = star_tensor(f, g.relabel_blocks({0: 1}), K, order)
    node_indices = [tuple(grid.index(lbl) for lbl in node) for node in rule.nodes]
    total = 0
    for ia, wa in zip(node_indices, rule.weights):
        for ib, wb in zip(node_indices, rule.weights):

            def sym_value(sym: PropagatorSymbol):
                return grid.kernel[ia[sym.row - 1]][ib[sym.col - 1]]

            def var_value(block: int, index: int):
                at = ia if block == 0 else ib
                return grid.field[at[index - 1]]

            value = symbolic.evaluate(var_value, sym_value, grid.hbar)
            total = total + wa * wb * value
    return _coerce_result(total, grid.mode)
