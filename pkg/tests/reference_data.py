"""Frozen expected values, derived by hand and checked against independent oracles.

TWO_QUBIT_BASES: the five two-qubit measurement bases as unnormalized
component lists (the four +-1/+-i lists have norm 2, so a 1/2 normalization
applies; the computational list is already normalized).  Order within a
list is by the computational index of the state label.  Vectors are only
fixed up to a global phase each, so tests must match projectively.

THREE_QUBIT_ORBIT_CLASSES: (kind, m, l, s, size) rows of the 24 label
orbits for n = 3, where kind separates the computational (slope 0) and
vertical bases from proper slopes.  For the computational and vertical
bases the orbit is classified by l alone (s = l, m = 0 recorded).
"""

I = 1j

TWO_QUBIT_BASES = {
    "computational": [
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 0, 1),
    ],
    "slope_a": [
        (1, I, 1, -I),
        (I, 1, -I, 1),
        (1, -I, 1, I),
        (-I, 1, I, 1),
    ],
    "slope_b": [
        (1, 1, I, -I),
        (1, 1, -I, I),
        (I, -I, 1, 1),
        (-I, I, 1, 1),
    ],
    "slope_full": [
        (I, 1, 1, -I),
        (1, I, -I, 1),
        (1, -I, I, 1),
        (-I, 1, 1, I),
    ],
    "vertical": [
        (1, 1, 1, 1),
        (1, -1, 1, -1),
        (1, 1, -1, -1),
        (1, -1, -1, 1),
    ],
}

THREE_QUBIT_ORBIT_CLASSES = [
    ("computational", 0, 0, 0, 1),
    ("computational", 0, 1, 1, 3),
    ("computational", 0, 2, 2, 3),
    ("computational", 0, 3, 3, 1),
    ("vertical", 0, 0, 0, 1),
    ("vertical", 0, 1, 1, 3),
    ("vertical", 0, 2, 2, 3),
    ("vertical", 0, 3, 3, 1),
    ("slope", 1, 0, 1, 3),
    ("slope", 1, 1, 0, 3),
    ("slope", 1, 1, 2, 6),
    ("slope", 1, 2, 1, 6),
    ("slope", 1, 2, 3, 3),
    ("slope", 1, 3, 2, 3),
    ("slope", 2, 0, 2, 3),
    ("slope", 2, 1, 1, 6),
    ("slope", 2, 1, 3, 3),
    ("slope", 2, 2, 0, 3),
    ("slope", 2, 2, 2, 6),
    ("slope", 2, 3, 1, 3),
    ("slope", 3, 0, 3, 1),
    ("slope", 3, 1, 2, 3),
    ("slope", 3, 2, 1, 3),
    ("slope", 3, 3, 0, 1),
]

THREE_QUBIT_TOTAL_POINTS = 72
