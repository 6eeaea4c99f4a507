"""Frozen reference values, worked out by hand and cross-checked with tests/oracles.py.

Nothing in here is produced by the package under test.
"""

# y^2 = 4(x^3 - x) expanded
ELLIPTIC_RELATION = "y^2 - 4*x^3 + 4*x"

# dim_Q h^n of Koszul complexes over Q[x] or Q[x, y]
#   (x^2, x^3): h^0 = Q[x]/(x^2); h^-1 is generated by x e - f with
#               x^2 (x e - f) = -d(e f), so h^-1 = Q[x]/(x^2)
#   (x, x):     change basis to (x, 0): h = Q (x) exterior(1 generator)
#   (x, x, x):  h = Q (x) exterior(2 generators): 1, 2, 1
KOSZUL_DIMS = {
    "x^2;x^3": {0: 2, -1: 2, -2: 0},
    "x;y": {0: 1, -1: 0, -2: 0},
    "x;x": {0: 1, -1: 1, -2: 0},
    "x;x;x": {0: 1, -1: 2, -2: 1, -3: 0},
    "x^2": {0: 2, -1: 0},
}

# h^-1 of Koszul(x^2, x^3) by weight (x weight 1): classes x e - f (weight 3) and x^2 e - x f
KOSZUL_X2_X3_WEIGHTS = [0, 0, 0, 1, 1, 0, 0]

# Q[x]/(x^2) resolved by d xi = x^2: Omega-bar is [R dxi --2x--> R dx]
FAT_POINT = {"amplitude": 1, "ranks": [1, 1], "virtual_dimension": 0}

# h^{-l} Der(B, A) for B = Q[x]{e: d e = x^3}, A = Koszul(x; x,...,x) (k copies),
# e -> x^2 e_0.  x acts by zero on h(A), so the cone splits:
# h^{-l} Der = h^{-l}(A) + h^{-l-1}(A).  Indexed by level l = 0, 1, 2.
DER_DIMS = {2: [2, 1, 0], 3: [3, 3, 1]}

# Cover of Q[x] by x, 1 - x: 1 = 1*x + 1*(1 - x)
UNIT_PARTITION_X = ["1", "1"]

# Twisted gluing on y^2 = 4(x^3 - x): glued h^-1 is the ideal of the point (0, 0)
TWISTED_IDEAL = ["x", "y"]
# pole order weights of x and y; their semigroup misses exactly 1
TWISTED_WEIGHTS = {"x": 2, "y": 3}
TWISTED_COLENGTH = 1
TWISTED_GAPS = [1]

# obstructed square: loop around 123 is the class of e, on the triangle (1, 2, 3)
OBSTRUCTION = {"triangle": (1, 2, 3), "generator": "z", "class": "e"}
