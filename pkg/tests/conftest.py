from __future__ import annotations

from fractions import Fraction

import pytest

from vortex_barcode.geometry import delaunay_triangulate
from vortex_barcode.synthetic import betti8_layout, concentric_layout, hexagonal_fan

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


_EPS = 2.0**-53
_INCIRCLE_BOUND = (10 + 96 * _EPS) * _EPS


def incircle_oracle(a, b, c, d) -> int:
    """Sign of the lifted incircle determinant with abc made counterclockwise.

    A float evaluation is trusted only when it clears a worst-case rounding
    bound; everything else goes to exact rational arithmetic.
    """
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    alift, blift, clift = adx * adx + ady * ady, bdx * bdx + bdy * bdy, cdx * cdx + cdy * cdy
    bc, ca, ab = bdx * cdy - bdy * cdx, cdx * ady - cdy * adx, adx * bdy - ady * bdx
    det = alift * bc + blift * ca + clift * ab
    permanent = (
        alift * (abs(bdx * cdy) + abs(bdy * cdx))
        + blift * (abs(cdx * ady) + abs(cdy * adx))
        + clift * (abs(adx * bdy) + abs(ady * bdx))
    )
    orient = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    o_bound = 4 * _EPS * (abs((b[0] - a[0]) * (c[1] - a[1])) + abs((b[1] - a[1]) * (c[0] - a[0])))
    if abs(det) > _INCIRCLE_BOUND * permanent and abs(orient) > o_bound:
        s = det if orient > 0 else -det
        return (s > 0) - (s < 0)
    return _incircle_exact(a, b, c, d)


def _incircle_exact(a, b, c, d) -> int:
    def det3(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    def det4(m):
        total = Fraction(0)
        for col in range(4):
            minor = [row[:col] + row[col + 1 :] for row in m[1:]]
            total += (-1) ** col * m[0][col] * det3(minor)
        return total

    rows = []
    for p in (a, b, c, d):
        x, y = Fraction(p[0]), Fraction(p[1])
        rows.append([x, y, x * x + y * y, Fraction(1)])
    orient = det3([[Fraction(p[0]), Fraction(p[1]), Fraction(1)] for p in (a, b, c)])
    s = det4(rows)
    s = s if orient > 0 else -s
    return (s > 0) - (s < 0)


@pytest.fixture
def betti8_tri():
    return delaunay_triangulate(betti8_layout())


@pytest.fixture
def hex_fan_tri():
    return delaunay_triangulate(hexagonal_fan())


@pytest.fixture
def concentric_tri():
    def make(k: int):
        return delaunay_triangulate(concentric_layout(k, outer_radius=3.0))

    return make
