"""Orthonormal polynomial bases for a weighted quadrature measure.

The basis is produced by an orthogonal factorization of the row-weighted
Vandermonde matrix, organized as an Arnoldi (column-by-column) process so
that node evaluations stay accurate at degrees far beyond what the monomial
coefficient representation can support.  A Cholesky factorization of the
monomial Gram matrix is available as an alternative route for cross checks.

Both routes populate the same data: the lower-triangular monomial
coefficient matrix C (orthonormal polynomial i is sum_j C[i,j] z^j, with
C[i,i] > 0), the Hessenberg recurrence coefficients used for stable
evaluation, and the cached orthonormal evaluations on the defining nodes.
"""

import hashlib
from dataclasses import dataclass, field
import json

import numpy as np

from . import _backend
from .errors import RankDeficientError

_RANK_TOL = 1e-13


@dataclass(frozen=True)
class WeightedSpace:
    """Polynomial space of degree <= degree_bound with a metric weight.

    The pointwise norm of a polynomial P at x is |P(x)| * exp(-k*phi(x))
    where k is the tensor power; metric_weight None means phi == 0 (the
    default planar trivialization).
    """

    degree_bound: int
    tensor_power: int = 1
    metric_weight: object = None  # callable on complex points, or None

    def __post_init__(self):
        if self.degree_bound < 0:
            raise ValueError("degree_bound must be >= 0")
        if self.tensor_power < 1:
            raise ValueError("tensor_power must be >= 1")

    @property
    def dimension(self):
        return self.degree_bound + 1

    def weight_scale(self, points):
        """exp(-k * phi) at the given points; validates finiteness."""
        pts = np.asarray(points, dtype=complex)
        if self.metric_weight is None:
            return np.ones(pts.shape, dtype=float)
        phi = np.asarray(self.metric_weight(pts), dtype=float)
        if phi.shape != pts.shape:
            raise ValueError("metric_weight must return one value per point")
        if not np.all(np.isfinite(phi)):
            raise ValueError("metric_weight must be finite at every point")
        return np.exp(-self.tensor_power * phi)


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal basis of a WeightedSpace w.r.t. a quadrature measure."""

    space: WeightedSpace
    coeffs: np.ndarray          # (n, n) lower-triangular, C[i,i] > 0
    gram_condition: float       # estimated condition number of the Gram matrix
    hessenberg: np.ndarray = field(repr=False, default=None)
    const_norm: float = field(repr=False, default=1.0)
    node_values: np.ndarray = field(repr=False, default=None)  # (m, n), orthonormal cols
    nodes: np.ndarray = field(repr=False, default=None)
    node_weights: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        for name in ("coeffs", "hessenberg", "node_values", "nodes", "node_weights"):
            arr = getattr(self, name)
            if arr is not None:
                arr.setflags(write=False)

    @property
    def dimension(self):
        return self.space.dimension

    @property
    def basis_id(self):
        h = hashlib.sha1()
        h.update(np.int64(self.dimension).tobytes())
        h.update(np.int64(self.space.tensor_power).tobytes())
        h.update(np.float64(self.const_norm).tobytes())
        h.update(self.hessenberg.tobytes())
        return h.hexdigest()[:16]

    def defined_on(self, points):
        if self.nodes is None:
            return False
        pts = np.asarray(points, dtype=complex)
        return self.nodes.shape == pts.shape and np.array_equal(self.nodes, pts)

    def to_dict(self):
        n = self.dimension
        return {
            "degree_bound": self.space.degree_bound,
            "tensor_power": self.space.tensor_power,
            "gram_condition": float(self.gram_condition),
            "coeffs": [[self.coeffs[i, j].real, self.coeffs[i, j].imag]
                       for i in range(n) for j in range(n)],
            "hessenberg": [[self.hessenberg[i, j].real, self.hessenberg[i, j].imag]
                           for i in range(n) for j in range(n)],
            "const_norm": float(self.const_norm),
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc):
        # the metric weight is a callable and is not serialized: deserialized
        # bases live in the default planar model (phi == 0)
        n = int(doc["degree_bound"]) + 1
        space = WeightedSpace(int(doc["degree_bound"]),
                              tensor_power=int(doc["tensor_power"]))
        coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]],
                          dtype=complex).reshape(n, n)
        hess = np.array([complex(re, im) for re, im in doc["hessenberg"]],
                        dtype=complex).reshape(n, n)
        return cls(space=space, coeffs=coeffs,
                   gram_condition=float(doc["gram_condition"]),
                   hessenberg=hess, const_norm=float(doc["const_norm"]),
                   node_values=None, nodes=None, node_weights=None)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def gram_matrix(mu, space):
    """Monomial Gram matrix G[i,j] = sum_a z_a^j conj(z_a)^i e^{-2k phi} w_a."""
    scale = space.weight_scale(mu.nodes)
    n = space.dimension
    vand = mu.nodes[:, None] ** np.arange(n)[None, :]
    rows = (np.sqrt(mu.weights) * scale)[:, None] * vand
    g = rows.conj().T @ rows
    return 0.5 * (g + g.conj().T)


def _arnoldi(z, row_scale, n):
    """Modified Gram-Schmidt Arnoldi on {1, z, z^2, ...} in the weighted
    discrete inner product.  row_scale = sqrt(w) * exp(-k phi).

    Returns (Q, H, h0): Q has orthonormal columns (poly values times
    row_scale), H holds the recurrence coefficients, h0 the norm of the
    constant.  Breakdown of the subdiagonal below the relative threshold
    signals a measure that cannot support the requested degree.
    """
    m = z.shape[0]
    q = np.empty((m, n), dtype=np.complex128)
    hess = np.zeros((n, n), dtype=np.complex128)
    v = row_scale.astype(np.complex128)
    h0 = np.linalg.norm(v)
    if h0 == 0.0:
        raise RankDeficientError("measure has no mass under the metric weight")
    q[:, 0] = v / h0
    pivot_max = h0
    for j in range(n - 1):
        v = z * q[:, j]
        # two Gram-Schmidt passes keep the columns orthonormal to ~eps
        for _ in range(2):
            proj = q[:, : j + 1].conj().T @ v
            v -= q[:, : j + 1] @ proj
            hess[: j + 1, j] += proj
        hn = np.linalg.norm(v)
        if hn < _RANK_TOL * pivot_max:
            raise RankDeficientError(
                f"Gram matrix numerically rank-deficient at degree {j + 1}"
            )
        pivot_max = max(pivot_max, hn)
        hess[j + 1, j] = hn
        q[:, j + 1] = v / hn
    return q, hess, float(h0)


def _coeffs_from_recurrence(hess, h0, n):
    """Monomial coefficients of the recurrence polynomials (lower-triangular)."""
    coeffs = np.zeros((n, n), dtype=np.complex128)
    coeffs[0, 0] = 1.0 / h0
    for j in range(n - 1):
        nxt = np.zeros(n, dtype=np.complex128)
        nxt[1 : j + 2] = coeffs[j, : j + 1]          # multiply by z
        nxt[: j + 1] -= hess[: j + 1, j] @ coeffs[: j + 1, : j + 1]
        coeffs[j + 1] = nxt / hess[j + 1, j]
    return coeffs


def _cholesky_route(mu, space, scale):
    n = space.dimension
    g = gram_matrix(mu, space)
    dg = np.real(np.diag(g))
    if np.min(dg) <= 0 or np.min(dg) < _RANK_TOL * np.max(dg):
        raise RankDeficientError("Gram matrix diagonal below rank threshold")
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise RankDeficientError("Gram matrix not positive definite") from exc
    dl = np.real(np.diag(chol))
    if np.min(dl) < _RANK_TOL * np.max(dl):
        raise RankDeficientError("Cholesky pivot below rank threshold")
    # conj(C) G C^T = I requires C = conj(L)^{-1} for complex nodes
    coeffs = np.linalg.inv(np.conj(chol))
    vand = mu.nodes[:, None] ** np.arange(n)[None, :]
    rows = (np.sqrt(mu.weights) * scale)[:, None] * vand
    q = rows @ coeffs.T
    # recover the recurrence data from the node values: z * q_j lies in
    # span{q_0..q_{j+1}} exactly, so the projections fill the Hessenberg
    zq = mu.nodes[:, None] * q
    full = q.conj().T @ zq
    hess = np.zeros((n, n), dtype=np.complex128)
    for j in range(n - 1):
        hess[: j + 1, j] = full[: j + 1, j]
        hess[j + 1, j] = abs(full[j + 1, j])
    return q, hess, coeffs, float(1.0 / coeffs[0, 0].real)


def orthonormalize(mu, space, method="auto"):
    """Orthonormal basis of `space` w.r.t. the weighted measure.

    method: "auto" uses the Arnoldi orthogonal factorization; "cholesky"
    forces the normal-equations route, which is accurate only while the
    monomial Gram matrix is well conditioned.  Raises RankDeficientError
    when the measure cannot support the space (the finite-node analogue of
    a pluripolar support).
    """
    n = space.dimension
    scale = space.weight_scale(mu.nodes)
    if method == "auto":
        method = "arnoldi"
    if method == "arnoldi":
        row_scale = np.sqrt(mu.weights) * scale
        q, hess, h0 = _arnoldi(mu.nodes, row_scale, n)
        coeffs = _coeffs_from_recurrence(hess, h0, n)
    elif method == "cholesky":
        q, hess, coeffs, h0 = _cholesky_route(mu, space, scale)
    else:
        raise ValueError(f"unknown method {method!r}")
    with np.errstate(over="ignore", invalid="ignore"):
        sing = np.linalg.svd(coeffs, compute_uv=False)
        cond = float((sing[0] / sing[-1]) ** 2) if sing[-1] > 0 else np.inf
    return OrthonormalBasis(
        space=space,
        coeffs=coeffs,
        gram_condition=cond,
        hessenberg=np.ascontiguousarray(hess),
        const_norm=h0,
        node_values=q,
        nodes=np.asarray(mu.nodes),
        node_weights=np.asarray(mu.weights),
    )


def evaluate_basis(basis, points):
    """Matrix of basis values at the points, metric weight folded in:
    Phi[a, i] = p_i(x_a) * exp(-k * phi(x_a)).

    Evaluation runs the stored recurrence, which stays accurate at degrees
    where the monomial coefficients of the basis are no longer usable.
    """
    pts = np.ascontiguousarray(np.atleast_1d(np.asarray(points, dtype=complex)))
    scale = basis.space.weight_scale(pts)
    return _backend.eval_recurrence(
        pts, np.ascontiguousarray(scale), basis.const_norm, basis.hessenberg
    )


def evaluate_basis_horner(basis, points):
    """Same values as evaluate_basis, via Horner on the monomial coefficients.

    Only trustworthy while gram_condition is moderate; kept as the
    independent cross-check of the recurrence route.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    scale = basis.space.weight_scale(pts)
    n = basis.dimension
    out = np.empty((pts.shape[0], n), dtype=complex)
    coeffs = basis.coeffs
    for i in range(n):
        acc = np.full(pts.shape[0], coeffs[i, i], dtype=complex)
        for j in range(i - 1, -1, -1):
            acc = acc * pts + coeffs[i, j]
        out[:, i] = acc
    return out * scale[:, None]
