"""The (base domain, mu) test grid used by the property and acceptance suites."""
from __future__ import annotations

from fractions import Fraction

from .domains import parse_domain, wallach_contains
from .hartogs import CartanHartogsParams

GRID_DOMAINS = ("I:1,1", "I:1,2", "I:2,2", "II:2", "III:5", "IV:3", "IV:4")


def mu_candidates(spec) -> list[tuple[str, Fraction]]:
    """Role-labelled exponents ``a/2, (r-1)a/2, mu0, 1, 1.7`` that lie in the Wallach set.

    Roles are kept even when two of them coincide numerically; ``mu = 0`` is
    dropped because the Hartogs exponent must be positive.
    """
    raw = [
        ("a/2", Fraction(spec.a, 2)),
        ("(r-1)a/2", Fraction((spec.r - 1) * spec.a, 2)),
        ("mu0", Fraction(spec.genus, spec.d + 1)),
        ("one", Fraction(1)),
        ("1.7", Fraction(17, 10)),
    ]
    return [(role, mu) for role, mu in raw if mu > 0 and wallach_contains(spec, mu)]


def parameter_grid(domains=GRID_DOMAINS) -> list[tuple[str, CartanHartogsParams]]:
    """``[(cell label, params), ...]`` over the role-labelled grid."""
    cells = []
    for label in domains:
        spec = parse_domain(label)
        for role, mu in mu_candidates(spec):
            cells.append((f"{label}|{role}={mu}", CartanHartogsParams(spec, mu)))
    return cells
