"""
Fixtures
========

Named maps used by the examples, the tests and the CLI.

The EX4 triple has t(f1) = f1 and t(f3) = f3; its f2 carries the labelled
points b1 < … < b8 = -4/5, -3/5, -2/5, -1/5, 1/5, 2/5, 3/5, 4/5.
"""

from .plmap import PLMap, PointedPLMap

ID = PointedPLMap([(-1, -1), (1, 1)])
W = PointedPLMap([(-1, -1), (0, 0), ("1/2", 1), (1, "-1/2")])
M = PointedPLMap(
    [(-1, -1), (0, 0), ("1/4", "1/2"), ("3/8", "1/4"), ("1/2", 1), (1, "-1/2")]
)
Z = PointedPLMap([(-1, 1), ("-1/2", "1/4"), (0, 0), ("1/4", "-1/2"), (1, 1)])
ZZ = PointedPLMap([(-1, 1), ("-1/4", "-1/4"), (0, 0), ("1/4", "1/4"), (1, -1)])
TENT = PLMap([(-1, -1), (0, 1), (1, -1)])

EX4_F1 = PointedPLMap([(-1, -1), ("-1/2", "1/2"), (0, 0), ("1/2", 1), (1, -1)])
EX4_F2 = PointedPLMap(
    [
        (-1, -1),
        ("-4/5", "1/4"),
        ("-3/5", "-3/8"),
        ("-2/5", "1/8"),
        ("-1/5", "-1/8"),
        (0, 0),
        ("1/5", "1/8"),
        ("2/5", "-5/16"),
        ("3/5", "-1/2"),
        ("4/5", 1),
        (1, "-3/4"),
    ]
)
EX4_F3 = PointedPLMap(
    [
        (-1, -1),
        ("-2/3", "2/5"),
        ("-1/3", "-1/5"),
        (0, 0),
        ("1/3", "1/5"),
        ("2/3", "-3/5"),
        (1, 1),
    ]
)
EX4 = (EX4_F1, EX4_F2, EX4_F3)

