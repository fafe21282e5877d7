"""Tour of the three-argument generalized Bessel function.

Evaluates J_n(u, v, delta) by its bilinear series, cross-checks against the
oscillatory-integral quadrature oracle, and exercises the identities the
function satisfies (recurrence, Fourier reconstruction, addition theorem).
Run: python3 demos/01_generalized_bessel.py
"""

import math

import numpy as np

from atispec import (
    gen_bessel,
    gen_bessel_orders,
    gen_bessel_quadrature,
    ordinary_bessel,
)

u, v, delta = 8.0, 2.0, 0.3

print("J_n(u, v, delta) with u=8, v=2, delta=0.3")
print(f"{'n':>4}  {'series':>28}  {'|series - quadrature|':>22}")
for n in range(0, 13, 2):
    s = gen_bessel(n, u, v, delta)
    q = gen_bessel_quadrature(n, u, v, delta)
    print(f"{n:>4}  {s.real:+.6e}{s.imag:+.6e}j  {abs(s - q):>22.3e}")

print("\nreduction to the ordinary Bessel function at v = 0:")
for n in (0, 3, 7):
    print(f"  J_{n}(u,0,d) = {gen_bessel(n, u, 0.0, delta).real:+.12f}"
          f"   J_{n}(u) = {ordinary_bessel(n, u):+.12f}")

print("\nrecurrence 2n J_n = u (J_(n-1) + J_(n+1)) + 2v (e^-2id J_(n-2) + e^2id J_(n+2)):")
j = gen_bessel_orders(2, 8, u, v, delta)
for n in (4, 6):
    lhs = 2 * n * j[n - 2]
    rhs = u * (j[n - 3] + j[n - 1]) + 2 * v * (
        np.exp(-2j * delta) * j[n - 4] + np.exp(2j * delta) * j[n])
    print(f"  n={n}: residual {abs(lhs - rhs):.3e}")

print("\nFourier reconstruction of exp(i[u sin(phi+d) + v sin 2 phi]):")
k = int(math.ceil(u + 2 * v)) + 40
ns = np.arange(-k, k + 1)
jn = gen_bessel_orders(-k, k, u, v, delta)
for phi in (0.4, 1.9):
    lhs = (np.exp(1j * ns * (phi + delta)) * jn).sum()
    rhs = np.exp(1j * (u * math.sin(phi + delta) + v * math.sin(2 * phi)))
    print(f"  phi={phi}: |partial sum - exponential| = {abs(lhs - rhs):.3e}")

print("\naddition theorem J_n(u+u', v+v', d) = sum_k J_(n-k)(u,v,d) J_k(u',v',d):")
up, vp = 3.0, 1.0
k = int(math.ceil(up + 2 * vp)) + 40
jk = gen_bessel_orders(-k, k, up, vp, delta)
for n in (2, 5):
    jn = gen_bessel_orders(n - k, n + k, u, v, delta)
    conv = complex((jn[::-1] * jk).sum())
    direct = gen_bessel(n, u + up, v + vp, delta)
    print(f"  n={n}: |convolution - direct| = {abs(conv - direct):.3e}")
