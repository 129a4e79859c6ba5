"""Density matrices, partial trace/transpose, eigenvalues and negativity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._jacobi import jacobi_eigh

HERMITIAN_TOL = 1e-10
#: Partial-transpose eigenvalues above ``-NEGATIVE_CUTOFF`` count as zero.
NEGATIVE_CUTOFF = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A state on a tensor product of factors with dimensions ``dims``.

    With ``check=True`` (default) the matrix must be Hermitian and unit-trace
    within 1e-12. Positivity is verified separately by :meth:`validate`
    because it costs an eigendecomposition.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    check: bool = True

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        dim = int(np.prod(dims))
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match factors {dims}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)
        if self.check:
            herm = np.abs(mat - mat.conj().T).max()
            if herm > 1e-12:
                raise ValueError(f"density matrix not Hermitian (deviation {herm:.3g})")
            tr = mat.trace().real
            if abs(tr - 1) > 1e-12:
                raise ValueError(f"density matrix trace is {tr!r}, expected 1")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def validate(self, psd_tol: float = 1e-10) -> None:
        """Raise ValueError unless Hermitian, unit-trace and positive semidefinite."""
        herm = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if herm > 1e-12:
            raise ValueError(f"not Hermitian (deviation {herm:.3g})")
        if abs(self.trace() - 1) > 1e-12:
            raise ValueError(f"trace {self.trace()!r} != 1")
        lo = hermitian_eigenvalues(self.matrix)[0]
        if lo < -psd_tol:
            raise ValueError(f"not positive semidefinite (min eigenvalue {lo:.3g})")


@dataclass(frozen=True)
class Bipartition:
    """Which retained factors belong to Alice; the rest are Bob's."""

    alice: tuple[int, ...]
    bob: tuple[int, ...]

    def check(self, n_factors: int) -> None:
        a, b = set(self.alice), set(self.bob)
        if not a or not b:
            raise ValueError("both sides of a bipartition must be non-empty")
        if a & b:
            raise ValueError(f"factors {sorted(a & b)} assigned to both sides")
        if a | b != set(range(n_factors)):
            raise ValueError(
                f"bipartition {sorted(a)}|{sorted(b)} does not cover factors 0..{n_factors - 1}"
            )

    @classmethod
    def first_vs_rest(cls, n_factors: int) -> "Bipartition":
        return cls((0,), tuple(range(1, n_factors)))


def from_pure(state) -> DensityMatrix:
    """``|psi><psi|`` of a normalized ``StateVector``.

    Factor structure is ``(alice_dim, 16)``, or ``(16,)`` for a bare Fock ket.
    """
    amps = np.asarray(state.amplitudes)
    norm = np.linalg.norm(amps)
    if abs(norm - 1) > 1e-9:
        raise ValueError(f"state is not normalized (norm {norm!r})")
    dims = (len(state.alice_labels), 16) if state.alice_labels else (16,)
    return DensityMatrix(np.outer(amps, amps.conj()), dims)


def _check_factors(indices: Sequence[int], n: int, what: str) -> list[int]:
    idx = [int(i) for i in indices]
    bad = [i for i in idx if not 0 <= i < n]
    if bad:
        raise ValueError(f"invalid factor index {bad} for {what} ({n} factors)")
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated factor index in {idx}")
    return idx


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every factor not in ``keep``.

    The result's factors appear in the order listed in ``keep``.
    """
    n = len(rho.dims)
    keep = _check_factors(keep, n, "partial trace")
    if not keep:
        raise ValueError("keep must name at least one factor")
    drop = [i for i in range(n) if i not in keep]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    perm = keep + drop
    t = t.transpose(perm + [n + i for i in perm])
    dk = int(np.prod([rho.dims[i] for i in keep]))
    dd = int(np.prod([rho.dims[i] for i in drop])) if drop else 1
    t = t.reshape(dk, dd, dk, dd)
    reduced = np.einsum("ajbj->ab", t)
    return DensityMatrix(reduced, tuple(rho.dims[i] for i in keep), check=rho.check)


def partial_transpose(
    rho: DensityMatrix | np.ndarray, over: Sequence[int], dims: Sequence[int] | None = None
) -> np.ndarray:
    """Transpose the row/column indices of the factors in ``over``.

    Accepts a :class:`DensityMatrix` or a bare square array with ``dims``.
    Returns a plain array: the result need not be positive.
    """
    if isinstance(rho, DensityMatrix):
        mat, dims = rho.matrix, rho.dims
    else:
        mat = np.asarray(rho)
        if dims is None:
            raise ValueError("dims required for a bare matrix")
        dims = tuple(dims)
        if mat.shape != (int(np.prod(dims)),) * 2:
            raise ValueError(f"matrix shape {mat.shape} does not match factors {dims}")
    n = len(dims)
    over = _check_factors(over, n, "partial transpose")
    axes = list(range(2 * n))
    for i in over:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return mat.reshape(tuple(dims) * 2).transpose(axes).reshape(mat.shape)


def hermitian_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and matching eigenvector columns of Hermitian ``m``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    mh = m.conj().T
    dev = np.abs(m - mh).max() if m.size else 0.0
    if dev > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3g})")
    m = 0.5 * (m + mh)
    w, v, sweeps = jacobi_eigh(np.ascontiguousarray(m), JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:  # pragma: no cover
        raise RuntimeError("Jacobi iteration did not converge")
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    return hermitian_eigh(m)[0]


def negativity(rho: DensityMatrix, cut: Bipartition | None = None) -> float:
    """Sum of |lambda| over the negative eigenvalues of the partial transpose.

    The transpose is taken over ``cut.alice`` (default: factor 0). Eigenvalues
    in ``(-1e-10, 0)`` are treated as zero.
    """
    cut = cut or Bipartition.first_vs_rest(len(rho.dims))
    cut.check(len(rho.dims))
    w = hermitian_eigenvalues(partial_transpose(rho, cut.alice))
    neg = w[w < -NEGATIVE_CUTOFF]
    return float(-neg.sum()) if neg.size else 0.0
