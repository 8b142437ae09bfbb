"""Built-in real symbols and spectral test functions for the experiments.

Symbols are vectorized callables on complex node arrays, written in the
plane coordinate: on the circle z = e^{i theta} the real part is cos(theta)
and the imaginary part sin(theta); on [-1,1] the real part is x itself.
"""

import numpy as np


def sym_one(z):
    return np.ones(np.shape(z), dtype=float)


def sym_cos(z):
    return np.real(z)


def sym_sin(z):
    return np.imag(z)


def sym_x(z):
    return np.real(z)


def sym_x2(z):
    return np.real(z) ** 2


REGISTRY = {
    "one": sym_one,
    "cos": sym_cos,
    "sin": sym_sin,
    "x": sym_x,
    "x2": sym_x2,
}


def resolve_symbol(spec):
    """Symbol callable from its CLI/config name.

    Accepts registry names, "const:<c>", and "poly:c0,c1,..." (polynomial in
    the real coordinate).  Returns (name, callable).
    """
    spec = spec.strip()
    if spec in REGISTRY:
        return spec, REGISTRY[spec]
    if spec.startswith("const:"):
        c = float(spec.split(":", 1)[1])

        def const(z, _c=c):
            return np.full(np.shape(z), _c)

        return spec, const
    if spec.startswith("poly:"):
        coeffs = [float(t) for t in spec.split(":", 1)[1].split(",") if t.strip()]
        if not coeffs:
            raise ValueError(f"empty polynomial spec {spec!r}")

        def poly(z, _c=tuple(coeffs)):
            t = np.real(z)
            acc = np.full(np.shape(t), _c[-1])
            for c in _c[-2::-1]:
                acc = acc * t + c
            return acc

        return spec, poly
    raise ValueError(f"unknown symbol {spec!r} "
                     f"(known: {sorted(REGISTRY)}, const:<c>, poly:c0,c1,...)")


def spectral_square(lam):
    return lam ** 2


def spectral_abs(lam):
    return np.abs(lam)


def spectral_identity(lam):
    return lam


def spectral_cube(lam):
    return lam ** 3


SPECTRAL_REGISTRY = {
    "square": spectral_square,
    "abs": spectral_abs,
    "identity": spectral_identity,
    "cube": spectral_cube,
}


def resolve_spectral(name):
    """Test function g: R -> R for spectral statistics."""
    name = name.strip()
    if name not in SPECTRAL_REGISTRY:
        raise ValueError(f"unknown spectral function {name!r} "
                         f"(known: {sorted(SPECTRAL_REGISTRY)})")
    return name, SPECTRAL_REGISTRY[name]
