"""Stored KO-dimension product tables.

Each table maps ``(row label, column label)`` to the product label, or to
``None`` for a blank cell (no consistent real structure for that Dirac
operator). Rows are the first factor, columns the second.
"""
from __future__ import annotations

from .real_structure import KOLabel

EVEN_ORDER = tuple(KOLabel.parse(s) for s in ("0+", "2+", "4+", "6+", "0-", "2-", "4-", "6-"))
ODD_ORDER = tuple(KOLabel.parse(s) for s in ("1-", "3+", "5-", "7+"))


def _grid(rows, cols, text):
    table = {}
    lines = [ln.split() for ln in text.strip().splitlines()]
    for row, cells in zip(rows, lines):
        assert cells[0] == str(row), (cells[0], row)
        assert len(cells) == len(cols) + 1
        for col, cell in zip(cols, cells[1:]):
            table[(row, col)] = None if cell == "." else KOLabel.parse(cell)
    return table


# D = D1 (x) 1 + chi1 (x) D2, both factors even
PRODUCT_D_EVEN = _grid(
    EVEN_ORDER,
    EVEN_ORDER,
    """
    0+ 0+ 2+ 4+ 6+ .  .  .  .
    2+ .  .  .  .  2+ 4+ 6+ 0+
    4+ 4+ 6+ 0+ 2+ .  .  .  .
    6+ .  .  .  .  6+ 0+ 2+ 4+
    0- .  .  .  .  0- 2- 4- 6-
    2- 2- 4- 6- 0- .  .  .  .
    4- .  .  .  .  4- 6- 0- 2-
    6- 6- 0- 2- 4- .  .  .  .
    """,
)

# D~ = D1 (x) chi2 + 1 (x) D2, both factors even
PRODUCT_DT_EVEN = _grid(
    EVEN_ORDER,
    EVEN_ORDER,
    """
    0+ 0+ .  4+ .  .  2- .  6-
    2+ 2+ .  6+ .  .  4- .  0-
    4+ 4+ .  0+ .  .  6- .  2-
    6+ 6+ .  2+ .  .  0- .  4-
    0- .  2+ .  6+ 0- .  4- .
    2- .  4+ .  0+ 2- .  6- .
    4- .  6+ .  2+ 4- .  0- .
    6- .  0+ .  4+ 6- .  2- .
    """,
)

# D, even first factor, odd second
PRODUCT_D_EVEN_ODD = _grid(
    EVEN_ORDER,
    ODD_ORDER,
    """
    0+ .  3+ .  7+
    2+ 3+ .  7+ .
    4+ .  7+ .  3+
    6+ 7+ .  3+ .
    0- 1- .  5- .
    2- .  5- .  1-
    4- 5- .  1- .
    6- .  1- .  5-
    """,
)

# D~, odd first factor, even second
PRODUCT_DT_ODD_EVEN = _grid(
    ODD_ORDER,
    EVEN_ORDER,
    """
    1- .  3+ .  7+ 1- .  5- .
    3+ 3+ .  7+ .  .  5- .  1-
    5- .  7+ .  3+ 5- .  1- .
    7+ 7+ .  3+ .  .  1- .  5-
    """,
)

# odd-odd: (M+, M-) as Pauli indices, 0 meaning the identity
_M_ROWS = {
    "1-": ((2, 1), (3, 0), (2, 1), (3, 0)),
    "3+": ((0, 3), (1, 2), (0, 3), (1, 2)),
    "5-": ((2, 1), (3, 0), (2, 1), (3, 0)),
    "7+": ((0, 3), (1, 2), (0, 3), (1, 2)),
}
M_TABLE = {
    (KOLabel.parse(r), col): pair for r, cells in _M_ROWS.items() for col, pair in zip(ODD_ORDER, cells)
}

TABLES = {
    2: PRODUCT_D_EVEN,
    3: PRODUCT_DT_EVEN,
    4: PRODUCT_D_EVEN_ODD,
    5: PRODUCT_DT_ODD_EVEN,
}
