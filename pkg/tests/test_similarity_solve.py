"""Width root finding: closed forms, the numeric scan and their agreement."""

from __future__ import annotations

import math

import numpy as np
import pytest

from compactlab.dsl import parse_equation, rescale_x, resolve_equation
from compactlab.similarity import branches, build_relation, scan_roots, solve_width
from compactlab.similarity.solve import RESIDUAL_TOLERANCE

ORACLE_FAMILIES = [("KdV", {}), ("K22", {}), ("NLS:3", {}), ("NLS:4", {}), ("K212", {"eps": 0.1})]


def _relation(name: str):
    return build_relation(resolve_equation(name))


def _polynomial_fn(polynomial: dict[int, float]):
    exponents = np.array(sorted(polynomial), dtype=float)
    weights = np.array([polynomial[int(e)] for e in exponents])

    def fn(widths: np.ndarray) -> np.ndarray:
        return np.sum(weights[:, None] * widths[None, :] ** exponents[:, None], axis=0)

    return fn


def _inside(roots, lower=1e-4, upper=1e4):
    return [root for root in roots if lower < root < upper]


def _well_separated(roots) -> bool:
    return all(b / a > 1.05 for a, b in zip(roots, roots[1:]))


def test_kdv_width_on_fixed_branch():
    solution = solve_width(_relation("KdV"), 1.0, 2.0, (1, 1, -1))

    assert solution.method == "closed_form"
    assert solution.roots == pytest.approx((1 / math.sqrt(8),), rel=1e-12)
    assert solution.closed_form == "L = 1/sqrt(V + 6*A)"
    assert solution.branch_text == "++-"


def test_k22_width_on_fixed_branch():
    solution = solve_width(_relation("K22"), 1.0, -1.5, (1, 1, -1))
    assert solution.roots == pytest.approx((4.0,), rel=1e-12)


def test_nls_double_root_is_flagged():
    solution = solve_width(_relation("NLS:3"), 1.0, 2.0, (-1, 1, 1))

    assert solution.roots == pytest.approx((1.0,), rel=1e-12)
    assert solution.double_root


def test_branch_without_positive_root_is_empty():
    solution = solve_width(_relation("KdV"), 1.0, 2.0, (1, 1, 1))

    assert solution.roots == ()
    assert solution.method == "closed_form"
    assert not solution.double_root


def test_unbound_parameter_is_an_error():
    with pytest.raises(ValueError, match="unbound parameter"):
        solve_width(_relation("K212"), 1.0, 1.0)


def test_degenerate_relation_has_no_width():
    solution = solve_width(build_relation(parse_equation("u_t = 0")), 1.0, 1.0, warn=False)

    assert solution.method == "degenerate"
    assert solution.roots == ()


def test_higher_degree_relation_falls_back_to_scan():
    rel = build_relation(parse_equation("u_t + u_x + u_xxxxx = 0"))
    solution = solve_width(rel, 1.0, 1.0, (1, 1, -1))

    assert solution.method == "scan"
    assert solution.closed_form is None
    assert solution.roots == pytest.approx((2 ** -0.25,), rel=1e-10)


def test_scan_finds_every_sign_change():
    roots = scan_roots(lambda x: (x - 0.5) * (x - 3.0) * (x - 40.0))
    assert roots == pytest.approx([0.5, 3.0, 40.0], rel=1e-10)


def test_scan_rejects_bad_interval():
    with pytest.raises(ValueError):
        scan_roots(lambda x: x - 1.0, lower=2.0, upper=1.0)


@pytest.mark.parametrize("name, params", ORACLE_FAMILIES)
def test_closed_form_matches_numeric_scan(name, params):
    rel = _relation(name)
    bound = rel.bind(params)
    rng = np.random.default_rng(20240611)
    compared = 0

    for _ in range(100):
        amplitude = float(rng.uniform(0.1, 3.0))
        velocity = float(rng.uniform(-3.0, 3.0))
        for branch in branches(rel):
            solution = solve_width(rel, amplitude, velocity, branch, bound=bound, warn=False)
            closed = _inside(solution.roots)
            if solution.double_root or not _well_separated(closed):
                continue
            polynomial = bound.polynomial(amplitude, velocity, branch)
            scanned = _inside(scan_roots(_polynomial_fn(polynomial)))
            assert len(scanned) == len(closed), (amplitude, velocity, branch)
            assert scanned == pytest.approx(closed, rel=1e-9)
            compared += len(closed)

    assert compared > 0


@pytest.mark.parametrize("name, params", ORACLE_FAMILIES)
def test_returned_roots_satisfy_the_relation(name, params):
    rel = _relation(name)
    bound = rel.bind(params)
    rng = np.random.default_rng(7)

    for _ in range(25):
        amplitude = float(rng.uniform(0.1, 3.0))
        velocity = float(rng.uniform(-3.0, 3.0))
        for branch in branches(rel):
            solution = solve_width(rel, amplitude, velocity, branch, bound=bound, warn=False)
            for root in solution.roots:
                terms = bound.terms(amplitude, velocity, root, branch)
                assert abs(terms.sum()) <= RESIDUAL_TOLERANCE * np.max(np.abs(terms))


@pytest.mark.parametrize("name, params", ORACLE_FAMILIES)
@pytest.mark.parametrize("scale", [2, 3])
def test_rescaling_x_scales_widths(name, params, scale):
    ast = resolve_equation(name)
    rel = build_relation(ast)
    scaled = build_relation(rescale_x(ast, scale))
    rng = np.random.default_rng(scale)

    for _ in range(20):
        amplitude = float(rng.uniform(0.2, 2.0))
        velocity = float(rng.uniform(-2.0, 2.0))
        for branch in branches(rel):
            base = solve_width(rel, amplitude, velocity, branch, params=params, warn=False)
            if base.double_root or not _well_separated(base.roots):
                continue
            moved = solve_width(
                scaled, amplitude, scale * velocity, branch, params=params, warn=False
            )
            expected = [scale * root for root in _inside(base.roots)]
            assert _inside(moved.roots, 1e-4 * scale, 1e4 * scale) == pytest.approx(
                expected, rel=1e-9
            )
