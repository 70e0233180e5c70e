"""Monodromy formulas, exactly over the rationals.

The vanishing-cycle reflection T(x) = x + (x . d) d, the terminating
log/exp series between unipotent and nilpotent operators, and the weight
filtration with its two defining conditions checked on the output.

Run:  python demos/monodromy_tour.py
"""

from fractions import Fraction

from zzl import (
    NilpotentOperator,
    Pairing,
    QMatrix,
    nilpotent_log,
    pl_operator,
    pl_transform,
    serialize_matrix,
    unipotent_exp,
    weight_filtration,
)
from zzl.monodromy import jordan_nilpotent

print("Reflection in a vanishing cycle (skew intersection form on H^3):")
omega = Pairing(QMatrix.from_rows([[0, 1], [-1, 0]]))
delta = (Fraction(1), Fraction(0))
t = pl_operator(delta, omega)
print(f"  gram = {serialize_matrix(omega.gram)}  (skew: {omega.is_skew})")
print(f"  T = {serialize_matrix(t)}")
print(f"  T fixes delta: {pl_transform(delta, delta, omega) == delta}")
u = t - QMatrix.identity(2)
print(f"  (T - I)^2 = {serialize_matrix(u * u)}  (unipotence, exactly)")

print("\nLogarithm of the monodromy: a finite alternating series.")
t3 = QMatrix.from_rows([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
n = nilpotent_log(t3)
print(f"  T   = {serialize_matrix(t3)}")
print(f"  log = {serialize_matrix(n.matrix)}   (note the exact -1/2)")
print(f"  exp(log T) == T: {unipotent_exp(n) == t3}")

print("\nWeight filtration of a nilpotent operator, centered at 3:")
op = jordan_nilpotent([3, 1])
w = weight_filtration(op, 3)
for weight, sub in w.steps:
    print(f"  W_{weight}: dim {sub.dim}")
print(f"  graded dims: {w.graded_dims()}")
print("  conditions N W_l <= W_(l-2) and N^j : Gr_(k+j) ~ Gr_(k-j) were")
print("  re-verified on the output before it was returned.")

print("\nThe zero operator has the one-step filtration:")
w0 = weight_filtration(NilpotentOperator(QMatrix.zero(2, 2)), 0)
print(f"  steps: {[(weight, sub.dim) for weight, sub in w0.steps]}")
