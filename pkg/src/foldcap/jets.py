"""Truncated bivariate Taylor polynomials (jets) at the origin.

A :class:`Jet2` of order ``N`` stores the coefficients of ``x**i * y**j`` for
``i + j <= N`` in a dense square array whose entries above the anti-diagonal
are kept at zero. Every operation truncates its result back to ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 9
DEFAULT_ORDER = 5


def _triangle_mask(order: int) -> np.ndarray:
    i, j = np.indices((order + 1, order + 1))
    return (i + j) <= order


class Jet2:
    """Jet of a scalar germ ``R^2, 0 -> R``.

    Instances are immutable; the coefficient array is read-only.
    """

    __slots__ = ("_order", "_coeffs")

    def __init__(self, order: int, coeffs=None):
        order = int(order)
        if order < 0:
            raise ValueError(f"jet order must be >= 0, got {order}")
        if order > MAX_ORDER:
            raise ValueError(f"jet order must be <= {MAX_ORDER}, got {order}")
        if coeffs is None:
            c = np.zeros((order + 1, order + 1))
        else:
            c = np.array(coeffs, dtype=float)
            if c.shape != (order + 1, order + 1):
                raise ValueError(
                    f"coefficient array must have shape {(order + 1, order + 1)}, got {c.shape}"
                )
            mask = _triangle_mask(order)
            if np.any(c[~mask] != 0.0):
                raise ValueError("coefficients of total degree above the jet order")
        c.setflags(write=False)
        self._order = order
        self._coeffs = c

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def n_coeffs(self) -> int:
        """Number of stored coefficients, ``(N+1)(N+2)/2``."""
        return (self._order + 1) * (self._order + 2) // 2

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        if i < 0 or j < 0 or i + j > self._order:
            return 0.0
        return float(self._coeffs[i, j])

    def terms(self) -> list[tuple[int, int, float]]:
        """Nonzero ``(i, j, value)`` triples in graded order."""
        out = []
        for d in range(self._order + 1):
            for i in range(d, -1, -1):
                v = self._coeffs[i, d - i]
                if v != 0.0:
                    out.append((i, d - i, float(v)))
        return out

    def constant(self) -> float:
        return float(self._coeffs[0, 0])

    def truncate(self, order: int) -> "Jet2":
        """Jet of lower order (drops terms of degree above ``order``)."""
        if order > self._order:
            raise ValueError("cannot raise the order of a jet by truncation")
        c = self._coeffs[: order + 1, : order + 1].copy()
        c[~_triangle_mask(order)] = 0.0
        return Jet2(order, c)

    def degree_part(self, d: int) -> "Jet2":
        """Homogeneous part of degree ``d``."""
        c = np.zeros_like(self._coeffs)
        for i in range(d + 1):
            if i <= self._order and d - i <= self._order and d <= self._order:
                c[i, d - i] = self._coeffs[i, d - i]
        return Jet2(self._order, c)

    def __add__(self, other):
        return jet_add(self, _coerce(other, self._order))

    __radd__ = __add__

    def __sub__(self, other):
        return jet_add(self, -_coerce(other, self._order))

    def __rsub__(self, other):
        return jet_add(_coerce(other, self._order), -self)

    def __neg__(self):
        return Jet2(self._order, -self._coeffs)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            return jet_mul(self, other)
        return Jet2(self._order, self._coeffs * float(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            raise ValueError("negative powers are not defined for jets")
        out = Jet2.one(self._order)
        for _ in range(n):
            out = jet_mul(out, self)
        return out

    def __call__(self, x, y):
        return jet_eval(self, x, y)

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        return self._order == other._order and np.array_equal(self._coeffs, other._coeffs)

    def __hash__(self):
        return hash((self._order, self._coeffs.tobytes()))

    def allclose(self, other: "Jet2", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        return self._order == other._order and np.allclose(
            self._coeffs, other._coeffs, rtol=rtol, atol=atol
        )

    def __repr__(self):
        if not self.terms():
            return f"Jet2(order={self._order}, 0)"
        parts = []
        for i, j, v in self.terms():
            mono = "".join(
                s for s in (_mono("x", i), _mono("y", j)) if s
            ) or "1"
            parts.append(f"{v:+.6g}*{mono}")
        return f"Jet2(order={self._order}, {' '.join(parts)})"

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "Jet2":
        return cls(order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "Jet2":
        return jet_from_coeffs(order, [(0, 0, 1.0)])

    @classmethod
    def x(cls, order: int = DEFAULT_ORDER) -> "Jet2":
        return jet_from_coeffs(order, [(1, 0, 1.0)])

    @classmethod
    def y(cls, order: int = DEFAULT_ORDER) -> "Jet2":
        return jet_from_coeffs(order, [(0, 1, 1.0)])


def _mono(var: str, power: int) -> str:
    if power == 0:
        return ""
    return var if power == 1 else f"{var}^{power}"


def _coerce(value, order: int) -> Jet2:
    if isinstance(value, Jet2):
        return value
    return jet_from_coeffs(order, [(0, 0, float(value))])


def jet_from_coeffs(order: int, entries: Iterable[tuple[int, int, float]]) -> Jet2:
    """Build a jet from ``(i, j, value)`` triples; unlisted coefficients are zero.

    Raises ``ValueError`` on a term of degree above ``order``, a negative
    exponent or a repeated monomial.
    """
    c = np.zeros((int(order) + 1, int(order) + 1))
    seen = set()
    for i, j, v in entries:
        i, j = int(i), int(j)
        if i < 0 or j < 0:
            raise ValueError(f"negative exponent in term ({i}, {j})")
        if i + j > order:
            raise ValueError(f"degree overflow: x^{i} y^{j} exceeds jet order {order}")
        if (i, j) in seen:
            raise ValueError(f"duplicate term ({i}, {j})")
        seen.add((i, j))
        c[i, j] = float(v)
    return Jet2(order, c)


def _check_orders(a: Jet2, b: Jet2) -> int:
    if a.order != b.order:
        raise ValueError(f"jet order mismatch: {a.order} != {b.order}")
    return a.order


def jet_add(a: Jet2, b: Jet2) -> Jet2:
    _check_orders(a, b)
    return Jet2(a.order, a.coeffs + b.coeffs)


def jet_mul(a: Jet2, b: Jet2) -> Jet2:
    """Cauchy product truncated to the shared order."""
    n = _check_orders(a, b)
    ca, cb = a.coeffs, b.coeffs
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1 - i):
            v = ca[i, j]
            if v == 0.0:
                continue
            # terms of b with (k, l) such that i+k + j+l <= n
            for k in range(n + 1 - i - j):
                row = cb[k, : n + 1 - i - j - k]
                out[i + k, j : j + row.size] += v * row
    return Jet2(n, out)


def jet_compose(outer: Jet2, inner_u: Jet2, inner_v: Jet2) -> Jet2:
    """Substitute ``u <- inner_u`` and ``v <- inner_v`` in ``outer(u, v)``.

    Both inner jets must vanish at the origin, so the truncated result is exact.
    """
    n = _check_orders(outer, inner_u)
    _check_orders(outer, inner_v)
    if inner_u.constant() != 0.0 or inner_v.constant() != 0.0:
        raise ValueError("inner jets must have zero constant term")
    u_pows = [Jet2.one(n)]
    v_pows = [Jet2.one(n)]
    for _ in range(n):
        u_pows.append(jet_mul(u_pows[-1], inner_u))
        v_pows.append(jet_mul(v_pows[-1], inner_v))
    acc = np.zeros((n + 1, n + 1))
    for i, j, c in outer.terms():
        acc += c * jet_mul(u_pows[i], v_pows[j]).coeffs
    return Jet2(n, acc)


def jet_diff(a: Jet2, variable: str) -> Jet2:
    """Formal partial derivative, kept at the same order (top-degree row is zero)."""
    n = a.order
    c = a.coeffs
    out = np.zeros((n + 1, n + 1))
    if variable == "x":
        k = np.arange(1, n + 1)[:, None]
        out[:-1, :] = k * c[1:, :]
    elif variable == "y":
        k = np.arange(1, n + 1)[None, :]
        out[:, :-1] = k * c[:, 1:]
    else:
        raise ValueError(f"variable must be 'x' or 'y', got {variable!r}")
    return Jet2(n, out)


def jet_eval(a: Jet2, x, y):
    """Evaluate the truncated polynomial; ``x`` and ``y`` may be arrays.

    Contracts the coefficient matrix with the power vectors of ``x`` and ``y``.
    """
    k = np.arange(a.order + 1)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xp = x[..., None] ** k
    yp = y[..., None] ** k
    acc = np.einsum("...i,ij,...j->...", xp, a.coeffs, yp)
    return float(acc) if acc.ndim == 0 else acc


@dataclass(frozen=True)
class Jet2Vec3:
    """Jet of a map-germ ``R^2, 0 -> R^3``."""

    components: tuple[Jet2, Jet2, Jet2]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != 3:
            raise ValueError("Jet2Vec3 needs exactly three components")
        if len({c.order for c in comps}) != 1:
            raise ValueError("all components must share one truncation order")
        object.__setattr__(self, "components", comps)

    @property
    def order(self) -> int:
        return self.components[0].order

    def __getitem__(self, k: int) -> Jet2:
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "Jet2Vec3") -> "Jet2Vec3":
        return Jet2Vec3(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "Jet2Vec3") -> "Jet2Vec3":
        return Jet2Vec3(tuple(a - b for a, b in zip(self, other)))

    def scale(self, s: Jet2) -> "Jet2Vec3":
        """Multiply every component by the scalar jet (or number) ``s``."""
        return Jet2Vec3(tuple(c * s for c in self))

    def dot(self, v: Sequence[float]) -> Jet2:
        """Scalar jet ``<v, self>`` for a constant vector ``v``."""
        return self[0] * v[0] + self[1] * v[1] + self[2] * v[2]

    def diff(self, variable: str) -> "Jet2Vec3":
        return Jet2Vec3(tuple(jet_diff(c, variable) for c in self))

    def constant(self) -> np.ndarray:
        return np.array([c.constant() for c in self])

    def coefficient(self, i: int, j: int) -> np.ndarray:
        """Vector coefficient of ``x**i y**j``."""
        return np.array([c[i, j] for c in self])

    def evaluate(self, x, y) -> np.ndarray:
        return np.stack([np.asarray(jet_eval(c, x, y)) for c in self], axis=-1)

    def compose(self, inner_u: Jet2, inner_v: Jet2) -> "Jet2Vec3":
        return Jet2Vec3(tuple(jet_compose(c, inner_u, inner_v) for c in self))

    def truncate(self, order: int) -> "Jet2Vec3":
        return Jet2Vec3(tuple(c.truncate(order) for c in self))

    def allclose(self, other: "Jet2Vec3", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        return all(a.allclose(b, rtol=rtol, atol=atol) for a, b in zip(self, other))
