"""The symmetric floor-quotient operators: dense or matrix-free.

Kinds:
  "A"          entries floor(N^2/(mn)), positive integers
  "A_general"  entries sum_{k <= N^2/(mn)} g(k) for a multiplicative weight g
  "Z"          entries -psi(N^2/(mn)) with psi(x) = {x} - 1/2 ({x} exact)
  "Z_fourier"  entries sin(2*pi*h*N^2/(mn)), argument reduced mod 1 exactly

Storage is a dense array when N <= dense_cap, otherwise rows are produced on
the fly from the entry rule; both storage modes give identical values.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .multiplicative import TotallyMultiplicative

DENSE_CAP_DEFAULT = 4000
_CHUNK_ROWS = 256

KINDS = ("A", "A_general", "Z", "Z_fourier")


class MatrixOperator:
    """Immutable N x N symmetric operator with matvec and quadratic forms."""

    def __init__(
        self,
        n: int,
        kind: str = "A",
        g: TotallyMultiplicative | None = None,
        h: int | None = None,
        dense_cap: int = DENSE_CAP_DEFAULT,
    ):
        if n < 1:
            raise ValueError("MatrixOperator: N must be >= 1")
        if kind not in KINDS:
            raise ValueError(f"unknown operator kind {kind!r}")
        if kind == "A_general" and g is None:
            raise ValueError("A_general requires a multiplicative weight g")
        if kind == "Z_fourier":
            if h is None or h < 1:
                raise ValueError("Z_fourier requires a positive mode h")
        self.n = n
        self.kind = kind
        self.g = g
        self.h = h
        self.dense_cap = dense_cap
        self._idx = np.arange(1, n + 1, dtype=np.int64)
        self._dense = self._rows_block(1, n + 1) if n <= dense_cap else None

    @property
    def is_dense(self) -> bool:
        return self._dense is not None

    @property
    def dtype(self):
        return np.int64 if self.kind == "A" else (
            np.complex128
            if self.kind == "A_general" and not self.g.integer_valued
            else np.float64
        )

    def _rows_block(self, m0: int, m1: int) -> np.ndarray:
        """Rows m0..m1-1 (1-based, half-open) straight from the entry rule."""
        n2 = self.n * self.n
        ms = np.arange(m0, m1, dtype=np.int64)[:, None]
        if self.kind == "A":
            # floor(N^2/(mn)) = floor(floor(N^2/m)/n)
            return (n2 // ms) // self._idx[None, :]
        mn = ms * self._idx[None, :]
        if self.kind == "A_general":
            flat = self.g.partial_sums_at((n2 // mn).ravel())
            block = flat.reshape(mn.shape)
            if self.g.integer_valued:
                return block.astype(np.int64)
            return block
        if self.kind == "Z":
            rem = n2 - (n2 // mn) * mn
            return 0.5 - rem / mn
        # Z_fourier: reduce h*N^2/(mn) mod 1 exactly before taking sin
        harg = self.h * n2
        rem = harg - (harg // mn) * mn
        return np.sin(2.0 * np.pi * (rem / mn))

    def rows(self, m0: int, m1: int) -> np.ndarray:
        if self._dense is not None:
            return self._dense[m0 - 1 : m1 - 1]
        return self._rows_block(m0, m1)

    def row(self, m: int) -> np.ndarray:
        return self.rows(m, m + 1)[0]

    def entry(self, m: int, n: int):
        """Single entry, 1-based indices."""
        if not (1 <= m <= self.n and 1 <= n <= self.n):
            raise IndexError("entry indices out of range")
        val = self.rows(m, m + 1)[0, n - 1]
        if self.kind == "A":
            return int(val)
        return complex(val) if self.dtype == np.complex128 else float(val)

    def dense(self) -> np.ndarray:
        if self._dense is None:
            raise ValueError(
                f"N = {self.n} exceeds dense_cap = {self.dense_cap}; "
                "matrix-free storage only"
            )
        return self._dense

    def _chunks(self) -> list[tuple[int, int]]:
        return [
            (m0, min(m0 + _CHUNK_ROWS, self.n + 1))
            for m0 in range(1, self.n + 1, _CHUNK_ROWS)
        ]

    def matvec(self, x: np.ndarray, threads: int = 1) -> np.ndarray:
        """y = A x in float64.  Chunk boundaries are fixed, so the result is
        independent of the thread count."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise ValueError(f"matvec: expected shape ({self.n},)")
        if self._dense is not None and self.kind != "A_general":
            return self._dense @ x
        y = np.empty(self.n, dtype=np.float64)
        chunks = self._chunks()

        def work(bounds):
            m0, m1 = bounds
            y[m0 - 1 : m1 - 1] = np.real(self.rows(m0, m1)) @ x

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(work, chunks))
        else:
            for bounds in chunks:
                work(bounds)
        return y

    def quadform(self, v: np.ndarray):
        """v^T A v; exact integer for kind "A" with an integer vector."""
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise ValueError(f"quadform: expected shape ({self.n},)")
        if self.kind == "A" and np.issubdtype(v.dtype, np.integer):
            vi = v.astype(np.int64)
            total = 0
            for m0, m1 in self._chunks():
                total += int(np.dot(self.rows(m0, m1) @ vi, vi[m0 - 1 : m1 - 1]))
            return total
        if np.issubdtype(v.dtype, np.complexfloating) or self.dtype == np.complex128:
            vc = v.astype(np.complex128)
            total = 0j
            for m0, m1 in self._chunks():
                total += complex(np.dot(self.rows(m0, m1) @ vc, vc[m0 - 1 : m1 - 1]))
            return total
        vf = v.astype(np.float64)
        total = 0.0
        for m0, m1 in self._chunks():
            total += float(np.dot(np.real(self.rows(m0, m1)) @ vf, vf[m0 - 1 : m1 - 1]))
        return total


def build_operator(
    kind: str,
    n: int,
    dense_cap: int = DENSE_CAP_DEFAULT,
    g: TotallyMultiplicative | None = None,
    h: int | None = None,
) -> MatrixOperator:
    """Construct an operator; dense storage iff n <= dense_cap."""
    return MatrixOperator(n=n, kind=kind, g=g, h=h, dense_cap=dense_cap)


def reciprocal_vector(n: int) -> np.ndarray:
    """f = (1, 1/2, ..., 1/N)."""
    return 1.0 / np.arange(1, n + 1, dtype=np.float64)


def ones_vector(n: int) -> np.ndarray:
    return np.ones(n, dtype=np.float64)


def mobius_vector(n: int, table) -> np.ndarray:
    """m = (mu(1), ..., mu(N)) as int64."""
    table.require(n)
    return table.mu[1 : n + 1].astype(np.int64)
