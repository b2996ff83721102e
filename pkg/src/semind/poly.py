"""Sparse multivariate polynomials with exact and vectorised float evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Sequence

import numpy as np

Exp = tuple[int, ...]


@dataclass(frozen=True)
class Polynomial:
    nvars: int
    terms: Mapping[Exp, Fraction | float]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        clean = {}
        for e, c in self.terms.items():
            if len(e) != self.nvars:
                raise ValueError("exponent length does not match the number of variables")
            if c != 0:
                clean[tuple(int(k) for k in e)] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    # algebra ---------------------------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, c: Fraction | float) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, k: int) -> "Polynomial":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.nvars, out)

    def __mul__(self, other: "Polynomial | Fraction | float | int") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict[Exp, Fraction | float] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other * -1

    def derivative(self, k: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                d = list(e)
                d[k] -= 1
                out[tuple(d)] = c * e[k]
        return Polynomial(self.nvars, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    # evaluation --------------------------------------------------------------------
    def __call__(self, x: Sequence) -> Fraction | float:
        if len(x) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        exact = all(isinstance(v, (int, Rational)) for v in x) and all(
            isinstance(c, (int, Rational)) for c in self.terms.values()
        )
        if exact:
            total = Fraction(0)
            for e, c in self.terms.items():
                t = Fraction(c)
                for v, k in zip(x, e):
                    if k:
                        t *= Fraction(v) ** k
                total += t
            return total
        return float(self.evaluate_many(np.asarray([x], dtype=float))[0])

    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if "arr" not in self._cache:
            exps = np.array(list(self.terms), dtype=np.int64).reshape(-1, self.nvars)
            coeffs = np.array([float(c) for c in self.terms.values()], dtype=float)
            self._cache["arr"] = (exps, coeffs)
        return self._cache["arr"]

    def evaluate_many(self, points: np.ndarray, chunk: int = 16384) -> np.ndarray:
        """Float evaluation at each row of ``points`` (shape (P, nvars))."""
        points = np.asarray(points, dtype=float)
        exps, coeffs = self._arrays()
        out = np.empty(points.shape[0])
        if not len(coeffs):
            out[:] = 0.0
            return out
        maxdeg = int(exps.max(initial=0))
        for start in range(0, points.shape[0], chunk):
            block = points[start:start + chunk]
            # powers[d][:, k] = block[:, k] ** d
            powers = [np.ones_like(block)]
            for _ in range(maxdeg):
                powers.append(powers[-1] * block)
            powers = np.stack(powers)  # (maxdeg+1, P, nvars)
            mono = np.ones((block.shape[0], len(coeffs)))
            for k in range(self.nvars):
                mono *= powers[exps[:, k], :, k].T
            out[start:start + chunk] = mono @ coeffs
        return out

    def gradient(self, x: Sequence[float]) -> np.ndarray:
        if "grad" not in self._cache:
            self._cache["grad"] = [self.derivative(k) for k in range(self.nvars)]
        pt = np.asarray([x], dtype=float)
        return np.array([float(d.evaluate_many(pt)[0]) for d in self._cache["grad"]])

    def hessian(self, x: Sequence[float]) -> np.ndarray:
        if "hess" not in self._cache:
            grads = [self.derivative(k) for k in range(self.nvars)]
            self._cache["hess"] = [[g.derivative(j) for j in range(self.nvars)] for g in grads]
        pt = np.asarray([x], dtype=float)
        return np.array([[float(d.evaluate_many(pt)[0]) for d in row] for row in self._cache["hess"]])


def univariate(coeffs_high_to_low: Sequence[Fraction | float]) -> Polynomial:
    deg = len(coeffs_high_to_low) - 1
    return Polynomial(1, {(deg - i,): c for i, c in enumerate(coeffs_high_to_low)})
