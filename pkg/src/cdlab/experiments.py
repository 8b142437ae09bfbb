"""k-sweep experiments: convergence tables for the limit theorems.

Each run writes a CSV with one row per k: the measured quantity, the
closed-form limit (taken from the equilibrium module where one exists), the
absolute gap, and wall time.  Independent k values may run in parallel
(CDLAB_THREADS); rows are always written in ascending k.
"""

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import equilibrium, kernel, measure, operator, symbols
from .basis import WeightedSpace, orthonormalize

EXPERIMENTS = ("szego", "algebra", "offdiag", "heatmap", "bm", "symbol_distance")

_DEFAULT_REGIONS = {
    "circle": {"a": "arc:0,1.5707963267948966", "b": "arc:3.141592653589793,4.71238898038469"},
    "interval": {"a": "interval:-0.9,-0.3", "b": "interval:0.3,0.9"},
}


class NumericalFailure(RuntimeError):
    """An experiment row could not be computed; carries the offending k."""

    def __init__(self, k, cause):
        super().__init__(f"numerical failure at k={k}: {cause}")
        self.k = k
        self.cause = cause


@dataclass
class MeasureSpec:
    kind: str = "circle"          # circle | interval | arcsine
    nodes_per_k: int = 4          # node count rule: max(nodes_per_k * k, min_nodes)
    min_nodes: int = 256

    def node_count(self, k):
        return max(self.nodes_per_k * k, self.min_nodes)

    def build(self, k):
        m = self.node_count(k)
        if self.kind == "circle":
            return measure.circle_lebesgue(m)
        if self.kind == "interval":
            return measure.interval_lebesgue(m)
        if self.kind == "arcsine":
            return measure.arcsine(m)
        raise ValueError(f"unknown measure kind {self.kind!r}")


@dataclass
class ExperimentConfig:
    experiment: str
    k_values: list
    measure_spec: MeasureSpec = field(default_factory=MeasureSpec)
    symbol_specs: dict = field(default_factory=dict)
    p: float = 2.0
    regions: dict = field(default_factory=dict)
    output_path: str = "report.csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        ks = [int(k) for k in self.k_values]
        if not ks:
            raise ValueError("k_values must be nonempty")
        if any(k < 1 for k in ks):
            raise ValueError("k_values must be positive")
        if sorted(ks) != ks:
            raise ValueError("k_values must be ascending")
        self.k_values = ks
        if self.p < 1:
            raise ValueError("p must be >= 1")
        for key, val in self.symbol_specs.items():
            if self.experiment == "szego" and key == "g":
                symbols.resolve_spectral(val)
            else:
                symbols.resolve_symbol(val)
        for sel in self.regions.values():
            _check_region_syntax(sel)

    @classmethod
    def from_dict(cls, doc):
        doc = dict(doc)
        ms = doc.pop("measure_spec", {})
        if isinstance(ms, str):
            ms = {"kind": ms}
        return cls(
            experiment=doc.pop("experiment"),
            k_values=doc.pop("k_values"),
            measure_spec=MeasureSpec(**ms),
            symbol_specs=doc.pop("symbol_specs", {}),
            p=float(doc.pop("p", 2.0)),
            regions=doc.pop("regions", {}),
            output_path=doc.pop("output_path", "report.csv"),
        )

    @classmethod
    def from_json_file(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _check_region_syntax(spec):
    tag, _, args = spec.partition(":")
    try:
        lo, hi = (float(t) for t in args.split(","))
    except ValueError as exc:
        raise ValueError(f"bad region spec {spec!r}") from exc
    if tag not in ("arc", "interval"):
        raise ValueError(f"unknown region type in {spec!r}")
    return tag, lo, hi


def resolve_region(spec, mu):
    """Index set from an "arc:start,end" or "interval:lo,hi" selector."""
    tag, lo, hi = _check_region_syntax(spec)
    if tag == "arc":
        return kernel.arc_indices(mu, lo, hi)
    return kernel.interval_indices(mu, lo, hi)


@dataclass(frozen=True)
class RateFit:
    slope: float
    residual: float


def fit_rate(series):
    """Least-squares slope of log(value) against log(k).

    series: iterable of (k, value) with at least 3 strictly positive values.
    """
    pts = [(float(k), float(v)) for k, v in series]
    if len(pts) < 3:
        raise ValueError("degenerate-series: need at least 3 points")
    if any(v <= 0 for _, v in pts):
        raise ValueError("degenerate-series: values must be positive")
    lk = np.log([k for k, _ in pts])
    lv = np.log([v for _, v in pts])
    design = np.column_stack([lk, np.ones_like(lk)])
    sol, *_ = np.linalg.lstsq(design, lv, rcond=None)
    resid = lv - design @ sol
    return RateFit(slope=float(sol[0]),
                   residual=float(np.sqrt(np.mean(resid ** 2))))


def _symbol(cfg, key, default):
    return symbols.resolve_symbol(cfg.symbol_specs.get(key, default))


def _heatmap_side_paths(output_path, k):
    stem, dot, ext = output_path.rpartition(".")
    if not dot:
        stem, ext = output_path, "csv"
    return f"{stem}_heatmap_k{k}.{ext}", f"{stem}_density_k{k}.{ext}"


def _basis_for(mu, k):
    return orthonormalize(mu, WeightedSpace(degree_bound=k - 1, tensor_power=k))


def _compute_row(cfg, k):
    """(quantity, limit) for one k of the configured experiment."""
    mu = cfg.measure_spec.build(k)
    exp = cfg.experiment

    if exp == "szego":
        _, f = _symbol(cfg, "f", "cos")
        _, g = symbols.resolve_spectral(cfg.symbol_specs.get("g", "square"))
        bs = _basis_for(mu, k)
        t = operator.toeplitz(bs, mu, f)
        quantity = operator.spectral_statistic(t, g)
        nu = equilibrium.equilibrium_for(mu)
        limit = equilibrium.integrate(nu, lambda pts: g(np.asarray(f(pts), dtype=float)))
        return quantity, limit

    if exp == "algebra":
        _, f = _symbol(cfg, "f", "cos")
        _, g = _symbol(cfg, "g", "sin")
        bs = _basis_for(mu, k)
        return operator.algebra_defect(bs, mu, f, g, cfg.p), 0.0

    if exp == "offdiag":
        regions = dict(_DEFAULT_REGIONS.get(mu.support_tag, {}))
        regions.update(cfg.regions)
        if "a" not in regions or "b" not in regions:
            raise ValueError("offdiag needs regions 'a' and 'b'")
        bs = _basis_for(mu, k)
        table = kernel.kernel_table(bs, mu)
        idx_a = resolve_region(regions["a"], mu)
        idx_b = resolve_region(regions["b"], mu)
        return kernel.bergman_mass(table, mu, idx_a, idx_b), 0.0

    if exp == "heatmap":
        bs = _basis_for(mu, k)
        table = kernel.kernel_table(bs, mu)
        hm_path, dens_path = _heatmap_side_paths(cfg.output_path, k)
        kernel.write_heatmap_csv(table, hm_path)
        kernel.write_density_csv(table, mu, dens_path)
        all_idx = np.arange(len(mu))
        quantity = kernel.bergman_mass(table, mu, all_idx, all_idx)
        try:
            limit = equilibrium.integrate(equilibrium.equilibrium_for(mu),
                                          lambda pts: np.ones(np.shape(pts)))
        except ValueError:
            limit = 1.0
        return quantity, limit

    if exp == "bm":
        bs = _basis_for(mu, k)
        grid = kernel.default_eval_grid(mu)
        return float(np.log(kernel.bm_constant(bs, grid)) / k), 0.0

    if exp == "symbol_distance":
        _, f = _symbol(cfg, "f", "cos")
        _, g = _symbol(cfg, "g", "one")
        bs = _basis_for(mu, k)
        quantity = operator.symbol_distance(bs, mu, f, g)
        nu = equilibrium.equilibrium_for(mu)
        limit = equilibrium.integrate(
            nu, lambda pts: np.abs(np.asarray(f(pts), float) - np.asarray(g(pts), float)))
        return quantity, limit

    raise ValueError(f"unknown experiment {exp!r}")


def _thread_count():
    raw = os.environ.get("CDLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run(cfg):
    """Execute the configured k-sweep and write the report CSV.

    Returns the list of row dicts.  Raises NumericalFailure with the
    offending k when a row cannot be computed.
    """

    def one(k):
        t0 = time.perf_counter()
        try:
            quantity, limit = _compute_row(cfg, k)
        except NumericalFailure:
            raise
        except Exception as exc:
            raise NumericalFailure(k, exc) from exc
        seconds = time.perf_counter() - t0
        return {
            "k": k,
            "n_k": k,
            "quantity": quantity,
            "limit": limit,
            "gap": abs(quantity - limit),
            "seconds": seconds,
        }

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, cfg.k_values))
    else:
        rows = [one(k) for k in cfg.k_values]
    rows.sort(key=lambda r: r["k"])

    with open(cfg.output_path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["k", "n_k", "quantity", "limit", "gap", "seconds"])
        for r in rows:
            out.writerow([r["k"], r["n_k"], repr(r["quantity"]), repr(r["limit"]),
                          repr(r["gap"]), f"{r['seconds']:.6f}"])
        if cfg.experiment == "offdiag":
            fit = fit_rate([(r["k"], r["quantity"]) for r in rows])
            fh.write(f"# fitted_slope,{fit.slope!r}\n")
            fh.write(f"# fit_residual,{fit.residual!r}\n")
    return rows
