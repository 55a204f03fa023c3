"""Spectral statistics, extreme/full eigensolvers, and bound checks."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .multiplicative import FoldTable, Principal
from .operators import (
    DENSE_CAP_DEFAULT,
    MatrixOperator,
    build_operator,
    ones_vector,
    reciprocal_vector,
)
from .zeta import constants

_CHUNK_ROWS = 256


class ConvergenceError(RuntimeError):
    """Power iteration failed to meet its residual target."""

    def __init__(self, message: str, last_residual: float):
        super().__init__(f"{message} (last residual {last_residual:.3e})")
        self.last_residual = last_residual


@dataclass(frozen=True)
class SpectralStats:
    """The scalar statistics of one A(N): partial zeta sums, the weighted
    fractional-part sums delta and phi, traces, and the special quadratic
    forms.  Integer fields are exact."""

    n: int
    zeta1: float
    zeta2: float
    delta: float
    phi: float
    trace_a: int
    trace_a2: int
    f_quadform: float
    u_quadform: int
    uf_form: float
    w_norm2: float
    w_quadform: float


def w_vector(n: int) -> np.ndarray:
    """w = u - (zeta1/zeta2) f, the ones vector minus its projection on f."""
    f = reciprocal_vector(n)
    zeta1 = float(np.sum(f))
    zeta2 = float(np.dot(f, f))
    return ones_vector(n) - (zeta1 / zeta2) * f


def compute_stats(n: int, threads: int = 1) -> SpectralStats:
    """All SpectralStats fields by direct O(N^2) sweeps.

    The sweep is chunked over row blocks with fixed boundaries (thread count
    never changes results).  u_quadform is additionally cross-computed as
    D_1 - 2 D_2 through fold sums of the constant-1 weight and the exact
    integer equality is asserted.
    """
    if n < 1:
        raise ValueError("compute_stats: N must be >= 1")
    n2 = n * n
    idx = np.arange(1, n + 1, dtype=np.int64)
    f = reciprocal_vector(n)
    zeta1 = float(np.sum(f))
    zeta2 = float(np.dot(f, f))
    w = ones_vector(n) - (zeta1 / zeta2) * f
    trace_a = int(np.sum(n2 // (idx * idx)))

    chunks = [(m0, min(m0 + _CHUNK_ROWS, n + 1)) for m0 in range(1, n + 1, _CHUNK_ROWS)]

    def sweep(bounds):
        m0, m1 = bounds
        ms = np.arange(m0, m1, dtype=np.int64)[:, None]
        mn = ms * idx[None, :]
        q = n2 // mn
        rem = n2 - q * mn
        mnf = mn.astype(np.float64)
        frac = rem / mnf
        qf = q.astype(np.float64)
        wseg = w[m0 - 1 : m1 - 1]
        return (
            int(np.sum(q * q)),
            int(np.sum(q)),
            float(np.sum(qf / mnf)),
            float(np.sum(qf / idx[None, :])),
            float(np.sum(frac / mnf)),
            float(np.sum(frac * frac)),
            float(np.dot(qf @ w, wseg)),
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(sweep, chunks))
    else:
        parts = [sweep(b) for b in chunks]

    trace_a2 = sum(p[0] for p in parts)
    u_quadform = sum(p[1] for p in parts)
    f_quadform = math.fsum(p[2] for p in parts)
    uf_form = math.fsum(p[3] for p in parts)
    delta = math.fsum(p[4] for p in parts)
    frac2 = math.fsum(p[5] for p in parts)
    w_quadform = math.fsum(p[6] for p in parts)
    phi = frac2 / n2
    w_norm2 = float(np.dot(w, w))

    cross = _u_quadform_via_divisors(n)
    if cross != u_quadform:
        raise ArithmeticError(
            f"u^T A u mismatch at N={n}: sweep {u_quadform}, divisor route {cross}"
        )
    return SpectralStats(
        n=n,
        zeta1=zeta1,
        zeta2=zeta2,
        delta=delta,
        phi=phi,
        trace_a=trace_a,
        trace_a2=trace_a2,
        f_quadform=f_quadform,
        u_quadform=u_quadform,
        uf_form=uf_form,
        w_norm2=w_norm2,
        w_quadform=w_quadform,
    )


def _u_quadform_via_divisors(n: int) -> int:
    """u^T A u = D_1 - 2 D_2 with D_1 = sum tau_3 up to N^2 and D_2 the
    over-range part, both through exact fold sums."""
    n2 = n * n
    fold = FoldTable(Principal(), n2, 3)
    d1 = fold.get(3, n2)
    d2 = 0
    m = n + 1
    while m <= n2:
        q = n2 // m
        m2 = n2 // q
        d2 += (m2 - m + 1) * fold.get(2, q)
        m = m2 + 1
    return d1 - 2 * d2


class TraceCheck(NamedTuple):
    trace_exact: int
    asymptotic: float
    deviation: float
    scaled_deviation: float  # |deviation| / N^(2/3)


def trace_closed_form_check(n: int) -> TraceCheck:
    """Tr(A) against zeta2*N^2 - (alpha-1)*N; reports |dev|/N^(2/3)."""
    if n < 1:
        raise ValueError("trace_closed_form_check: N must be >= 1")
    idx = np.arange(1, n + 1, dtype=np.int64)
    trace = int(np.sum((n * n) // (idx * idx)))
    f = reciprocal_vector(n)
    zeta2 = float(np.dot(f, f))
    c = constants()
    asym = zeta2 * n * n - (c.alpha - 1.0) * n
    dev = trace - asym
    return TraceCheck(trace, asym, dev, abs(dev) / n ** (2.0 / 3.0))


@dataclass(frozen=True)
class SpectralResult:
    """Eigenpairs in ascending eigenvalue order.

    mode "full": all N pairs; mode "extreme": the pair with the smallest and
    the pair with the largest eigenvalue only.  indices are the 1-based
    positions in the full ascending ordering.  residuals are ||Av - lv||
    per pair (unit vectors)."""

    mode: str
    n: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns match eigenvalues
    residuals: np.ndarray
    indices: np.ndarray
    iterations: int = 0

    def to_rows(self) -> list[tuple[int, int, float, float]]:
        """CSV rows (N, k, lambda, residual)."""
        return [
            (self.n, int(k), float(lam), float(r))
            for k, lam, r in zip(self.indices, self.eigenvalues, self.residuals)
        ]


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Largest-magnitude component of each column made positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            out[:, j] = -col
    return out


def full_spectrum(op: MatrixOperator) -> SpectralResult:
    """Dense symmetric eigendecomposition (LAPACK), ascending, orthonormal.

    Residuals are computed explicitly and returned; they satisfy
    ||Av - lv|| <= 1e-8 (1 + |l|) for the sizes this package targets."""
    a = np.asarray(np.real(op.dense()), dtype=np.float64)
    eigvals, eigvecs = np.linalg.eigh(a)
    eigvecs = _fix_signs(eigvecs)
    resid = np.linalg.norm(a @ eigvecs - eigvecs * eigvals[None, :], axis=0)
    return SpectralResult(
        mode="full",
        n=op.n,
        eigenvalues=eigvals,
        eigenvectors=eigvecs,
        residuals=resid,
        indices=np.arange(1, op.n + 1),
    )


def extreme_eigenpairs(
    op: MatrixOperator,
    tol: float = 1e-9,
    max_iter: int = 2000,
    threads: int = 1,
) -> SpectralResult:
    """(lambda_1, e_1) and (lambda_N, e_N) by power iteration with deflation.

    Phase one iterates A from the normalized reciprocal vector and captures
    the dominant pair; phase two iterates A - lambda_N e_N e_N^T (with
    re-orthogonalization each step) whose dominant-in-magnitude pair is the
    smallest eigenvalue's, signs resolved by the Rayleigh quotient.  Raises
    ConvergenceError with the last residual if max_iter is exhausted.
    """
    n = op.n
    if n == 1:
        lam = float(np.real(op.entry(1, 1)))
        vec = np.ones((1, 1))
        return SpectralResult(
            mode="extreme",
            n=1,
            eigenvalues=np.array([lam, lam]),
            eigenvectors=np.hstack([vec, vec]),
            residuals=np.zeros(2),
            indices=np.array([1, 1]),
            iterations=0,
        )

    def iterate(mv, seed, name, tol_rel, stall_tol):
        """Power iteration to relative residual tol_rel; if the residual
        stalls at its roundoff floor, accept the best iterate provided it
        meets stall_tol, else raise with the best residual seen."""
        v = seed / np.linalg.norm(seed)
        best_res, best_lam, best_v, best_it = math.inf, 0.0, v, 0
        for it in range(1, max_iter + 1):
            y = mv(v)
            lam = float(np.dot(v, y))
            res = float(np.linalg.norm(y - lam * v))
            if res < best_res:
                best_res, best_lam, best_v, best_it = res, lam, v, it
            if res <= tol_rel * (1.0 + abs(lam)):
                return lam, v, it
            if it - best_it >= 12 or it == max_iter:
                if best_res <= stall_tol * (1.0 + abs(best_lam)):
                    return best_lam, best_v, it
                raise ConvergenceError(
                    f"{name} power iteration did not converge", best_res
                )
            norm = float(np.linalg.norm(y))
            if norm == 0.0:
                return 0.0, v, it
            v = y / norm
        raise ConvergenceError(f"{name} power iteration did not converge", best_res)

    # the dominant pair is driven to its roundoff floor: the deflated phase's
    # residual against A is limited from below by lambda_N * (e_N error)
    f_hat = reciprocal_vector(n)
    lam_top, e_top, it_top = iterate(
        lambda v: op.matvec(v, threads=threads),
        f_hat,
        "dominant",
        tol_rel=min(tol, 5e-15),
        stall_tol=tol,
    )

    def deflated(v):
        v = v - np.dot(e_top, v) * e_top
        y = op.matvec(v, threads=threads) - lam_top * np.dot(e_top, v) * e_top
        return y - np.dot(e_top, y) * e_top

    seed = w_vector(n)
    seed = seed - np.dot(e_top, seed) * e_top
    if float(np.linalg.norm(seed)) == 0.0:
        seed = np.eye(n)[0] - np.dot(e_top, np.eye(n)[0]) * e_top
    lam_bot, e_bot, it_bot = iterate(
        deflated, seed, "deflated", tol_rel=tol, stall_tol=tol
    )

    vecs = _fix_signs(np.column_stack([e_bot, e_top]))
    e_bot, e_top = vecs[:, 0], vecs[:, 1]
    res_bot = float(np.linalg.norm(op.matvec(e_bot, threads=threads) - lam_bot * e_bot))
    res_top = float(np.linalg.norm(op.matvec(e_top, threads=threads) - lam_top * e_top))
    return SpectralResult(
        mode="extreme",
        n=n,
        eigenvalues=np.array([lam_bot, lam_top]),
        eigenvectors=vecs,
        residuals=np.array([res_bot, res_top]),
        indices=np.array([1, n]),
        iterations=it_top + it_bot,
    )


@dataclass(frozen=True)
class BoundCheck:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    checks: tuple[BoundCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def check(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def bounds_report(
    n: int,
    dense_cap: int = DENSE_CAP_DEFAULT,
    threads: int = 1,
    stats: SpectralStats | None = None,
    spectrum: SpectralResult | None = None,
) -> BoundsReport:
    """Checks the eigenvalue window, the tail square-sum bound, per-index
    magnitude bounds, the top-eigenvector alignment constant, and the
    Rayleigh upper bound on the smallest eigenvalue.

    Interior-eigenvalue checks need a full spectrum and are reported as
    skipped when N exceeds dense_cap."""
    if stats is None:
        stats = compute_stats(n, threads=threads)
    if spectrum is None:
        op = build_operator("A", n, dense_cap=dense_cap)
        if n <= dense_cap:
            spectrum = full_spectrum(op)
        else:
            spectrum = extreme_eigenpairs(op, threads=threads)
    lam_bot = float(spectrum.eigenvalues[0])
    lam_top = float(spectrum.eigenvalues[-1])
    e_top = spectrum.eigenvectors[:, -1]
    z2 = stats.zeta2
    checks = []

    gap = lam_top - z2 * n * n
    lo, hi = -((1.0 + math.log(n)) ** 2) / z2, 1.0 / (2.0 * z2)
    checks.append(
        BoundCheck(
            "top_eigenvalue_window",
            "pass" if lo < gap < hi else "fail",
            {"gap": gap, "lower": lo, "upper": hi},
        )
    )

    if spectrum.mode == "full":
        tail = float(np.sum(spectrum.eigenvalues[:-1] ** 2))
        mid = stats.phi * n * n - stats.delta**2 / z2**2
        ok = tail <= mid and mid < n * n
        checks.append(
            BoundCheck(
                "tail_square_sum",
                "pass" if ok else "fail",
                {"tail": tail, "bound": mid, "n_squared": float(n * n)},
            )
        )
        if n >= 2:
            ks = np.arange(1, n)
            caps = n / np.sqrt(np.minimum(ks, n - ks))
            bad = int(np.sum(np.abs(spectrum.eigenvalues[:-1]) >= caps))
            checks.append(
                BoundCheck(
                    "interior_magnitude",
                    "pass" if bad == 0 else "fail",
                    {"violations": bad},
                )
            )
        else:
            checks.append(BoundCheck("interior_magnitude", "skipped", {}))
    else:
        checks.append(BoundCheck("tail_square_sum", "skipped", {}))
        checks.append(BoundCheck("interior_magnitude", "skipped", {}))

    if n >= 2:
        f_hat = reciprocal_vector(n)
        f_hat = f_hat / np.linalg.norm(f_hat)
        dist = min(
            float(np.linalg.norm(e_top - f_hat)), float(np.linalg.norm(e_top + f_hat))
        )
        const = dist * n / math.log(n)
        checks.append(
            BoundCheck(
                "top_eigenvector_alignment",
                "pass",
                {"distance": dist, "constant": const},
            )
        )
    else:
        checks.append(BoundCheck("top_eigenvector_alignment", "skipped", {}))

    if stats.w_norm2 > 0:
        rayleigh = stats.w_quadform / stats.w_norm2
        checks.append(
            BoundCheck(
                "rayleigh_upper_bound_smallest",
                "pass" if lam_bot <= rayleigh else "fail",
                {"lambda_1": lam_bot, "rayleigh": rayleigh},
            )
        )
    else:
        checks.append(BoundCheck("rayleigh_upper_bound_smallest", "skipped", {}))
    return BoundsReport(n=n, checks=tuple(checks))


class PhiCheck(NamedTuple):
    phi: float
    beta: float
    gap: float


def phi_limit_check(
    n: int, stats: SpectralStats | None = None, threads: int = 1
) -> PhiCheck:
    """Distance of phi(N) from its limiting value beta."""
    if stats is None:
        stats = compute_stats(n, threads=threads)
    beta = constants().beta
    return PhiCheck(stats.phi, beta, abs(stats.phi - beta))


class WFormCheck(NamedTuple):
    w_quadform_over_n2: float
    c4: float
    gap: float
    rayleigh: float  # w^T A w / (N ||w||^2), comparable to lambda_1/N


def w_form_check(
    n: int, stats: SpectralStats | None = None, threads: int = 1
) -> WFormCheck:
    """w^T A w / N^2 against c4, plus the scaled Rayleigh quotient."""
    if stats is None:
        stats = compute_stats(n, threads=threads)
    c4 = constants().c4
    over_n2 = stats.w_quadform / (n * n)
    rayleigh = (
        stats.w_quadform / (n * stats.w_norm2) if stats.w_norm2 > 0 else 0.0
    )
    return WFormCheck(over_n2, c4, abs(over_n2 - c4), rayleigh)


#: Reported second-eigenvalue scaling interval, annotation only (never asserted).
SCAN_ANNOTATION = {"lambda_1_over_n_observed_interval": (-0.572, -0.496)}


class ScanRow(NamedTuple):
    k: int
    n: int
    index: int
    lambda_over_n: float
    tail: dict  # theta -> sqrt(N) * e_{index, floor(theta*N)+1}


def scaling_scan(
    k_values,
    n_values,
    dense_cap: int = DENSE_CAP_DEFAULT,
    theta_grid: tuple[float, ...] = (0.25, 0.5, 0.75),
) -> list[ScanRow]:
    """Raw eigenvalue/eigenvector scaling data for fixed offsets k.

    The eigenvalue index for offset k at size N is N-k for k > 0 and |k| for
    k < 0 (the fractional-part index rule at arguments where it is defined;
    N > |k| is required).  Emits lambda_index/N and, for each theta in the
    grid, the eigenvector component just past theta*N scaled by sqrt(N).
    Output is observational; nothing is asserted beyond well-formedness.
    """
    rows = []
    for n in n_values:
        if n > dense_cap:
            raise ValueError(f"scaling_scan: N={n} exceeds dense_cap={dense_cap}")
        spec = full_spectrum(build_operator("A", n, dense_cap=dense_cap))
        for k in k_values:
            if k == 0:
                raise ValueError("scaling_scan: k must be nonzero")
            if n <= abs(k):
                raise ValueError(f"scaling_scan: need N > |k|, got N={n}, k={k}")
            index = n - k if k > 0 else -k
            vec = spec.eigenvectors[:, index - 1]
            tail = {}
            for theta in theta_grid:
                pos = int(theta * n) + 1
                if pos <= n:
                    tail[theta] = float(math.sqrt(n) * vec[pos - 1])
            rows.append(
                ScanRow(
                    k=k,
                    n=n,
                    index=index,
                    lambda_over_n=float(spec.eigenvalues[index - 1]) / n,
                    tail=tail,
                )
            )
    return rows
