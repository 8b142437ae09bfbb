"""Finite quadrature representations of positive measures on the plane.

A measure is a list of complex nodes with positive weights plus metadata:
the largest joint moment degree the rule integrates exactly, and a support
tag used for closed-form dispatch downstream.
"""

import json
from dataclasses import dataclass

import numpy as np

CIRCLE = "circle"
INTERVAL = "interval"
CUSTOM = "custom"

_SUPPORT_TAGS = (CIRCLE, INTERVAL, CUSTOM)
_SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureMeasure:
    """Weighted node set; immutable after construction.

    nodes       complex points in the plane
    weights     strictly positive mass per node
    exactness   largest d such that all moments z^a conj(z)^b, a+b <= d,
                are integrated exactly (0 if unknown / discrete)
    support_tag one of "circle", "interval", "custom"
    """

    nodes: np.ndarray
    weights: np.ndarray
    exactness: int
    support_tag: str

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.complex128)
        weights = np.asarray(self.weights, dtype=np.float64)
        if nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("nodes must be a nonempty 1-d sequence")
        if weights.shape != nodes.shape:
            raise ValueError(
                f"length mismatch: {nodes.size} nodes vs {weights.size} weights"
            )
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
            raise ValueError("weights must be finite and strictly positive")
        if not np.all(np.isfinite(nodes.real) & np.isfinite(nodes.imag)):
            raise ValueError("nodes must be finite")
        if self.support_tag not in _SUPPORT_TAGS:
            raise ValueError(f"unknown support_tag {self.support_tag!r}")
        if self.support_tag == CIRCLE:
            if np.max(np.abs(np.abs(nodes) - 1.0)) > _SUPPORT_TOL:
                raise ValueError("circle support requires | |node| - 1 | <= 1e-12")
        if self.support_tag == INTERVAL:
            if np.max(np.abs(nodes.imag)) > _SUPPORT_TOL:
                raise ValueError("interval support requires real nodes")
            if np.max(np.abs(nodes.real)) > 1.0 + _SUPPORT_TOL:
                raise ValueError("interval support requires nodes in [-1, 1]")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "exactness", int(self.exactness))

    def __len__(self):
        return self.nodes.size

    @property
    def total_mass(self):
        return float(self.weights.sum())

    def integrate(self, f):
        """Quadrature sum of a function given as a callable on the nodes."""
        vals = np.asarray(f(self.nodes))
        return complex(np.sum(vals * self.weights)) if np.iscomplexobj(vals) \
            else float(np.sum(vals * self.weights))

    def to_dict(self):
        return {
            "nodes": [[z.real, z.imag] for z in self.nodes],
            "weights": [float(w) for w in self.weights],
            "support_tag": self.support_tag,
            "exactness": self.exactness,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc):
        nodes = np.array([complex(re, im) for re, im in doc["nodes"]])
        return cls(
            nodes=nodes,
            weights=np.asarray(doc["weights"], dtype=float),
            exactness=int(doc.get("exactness", 0)),
            support_tag=doc["support_tag"],
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def circle_lebesgue(m):
    """Uniform probability measure on the unit circle, m equispaced atoms.

    Integrates z^j to 0 exactly for 1 <= |j| <= m-1 (root-of-unity
    cancellation), so monomials up to degree m-1 are orthonormal.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    nodes = np.exp(2j * np.pi * np.arange(m) / m)
    weights = np.full(m, 1.0 / m)
    return QuadratureMeasure(nodes, weights, exactness=m - 1, support_tag=CIRCLE)


def _legendre_pair(m, x):
    """Value and derivative of the degree-m Legendre polynomial at x."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, m + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    dp = m * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def _gauss_legendre(m):
    """Gauss-Legendre nodes/weights for dx on [-1,1] by Newton iteration.

    Chebyshev-type initial guesses, tolerance 1e-15, at most 100 sweeps.
    """
    if m == 1:
        return np.zeros(1), np.full(1, 2.0)
    a = np.arange(1, m + 1)
    x = np.cos(np.pi * (a - 0.25) / (m + 0.5))
    dp = np.ones_like(x)
    for _ in range(100):
        p, dp = _legendre_pair(m, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dp = _legendre_pair(m, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # enforce the exact +/- symmetry of the rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    return x[order], w[order]


def interval_lebesgue(m):
    """Gauss-Legendre rule of order m for dx on [-1,1] (total mass 2)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    x, w = _gauss_legendre(m)
    return QuadratureMeasure(
        x.astype(complex), w, exactness=2 * m - 1, support_tag=INTERVAL
    )


def arcsine(m):
    """Gauss-Chebyshev (first kind) rule for dx/(pi*sqrt(1-x^2)), mass 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    a = np.arange(1, m + 1)
    x = np.cos((2 * a - 1) * np.pi / (2 * m))
    w = np.full(m, 1.0 / m)
    order = np.argsort(x)
    return QuadratureMeasure(
        x[order].astype(complex), w, exactness=2 * m - 1, support_tag=INTERVAL
    )


def from_points(nodes, weights):
    """Discrete measure from user-supplied atoms (exactness unknown)."""
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if nodes.size == 0:
        raise ValueError("empty node list")
    if nodes.shape != weights.shape:
        raise ValueError("nodes and weights must have equal length")
    if np.any(weights <= 0.0):
        raise ValueError("nonpositive weight")
    return QuadratureMeasure(nodes, weights, exactness=0, support_tag=CUSTOM)


def scale_by(mu, g):
    """Tilt the measure by exp(-g): weight at node x becomes w(x)*exp(-g(x)).

    Keeps the nodes and support tag.  Exactness is reset to 0 unless g is
    identically zero on the nodes.
    """
    gvals = np.asarray(g(mu.nodes), dtype=float)
    if gvals.shape != mu.nodes.shape:
        raise ValueError("g must return one value per node")
    if not np.all(np.isfinite(gvals)):
        raise ValueError("g must be finite at every node")
    new_w = mu.weights * np.exp(-gvals)
    exact = mu.exactness if np.all(gvals == 0.0) else 0
    return QuadratureMeasure(mu.nodes, new_w, exactness=exact,
                             support_tag=mu.support_tag)
