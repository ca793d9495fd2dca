"""Independent high-precision values for the unit tests.

Run: python3 tests/oracles/frozen_values.py > tests/unit/frozen.hpp
Needs mpmath and sympy. The output is checked in; tests never call Python.
"""
import sympy as sp
from mpmath import mp, mpf, sqrt, pi, fib, nstr

mp.dps = 60


def s(x, digits=40):
    return nstr(x, digits, strip_zeros=False)


def metallic(m):
    return (m + sqrt(m * m + 4)) / 2


def omega(m):
    return pi / m * (2 + m - sqrt(m * m + 4))


def bound(d):
    d = mpf(d)
    return 1 / (d + 1) - sqrt(1 / (2 * d * (d + 1)))


def test_matrix():
    # Same formula as in test_bigmat.cpp.
    n = 8
    h = sp.zeros(n, n)
    for j in range(n):
        h[j, j] = sp.Rational((j % 4) * 2 - 3, 2)
        for k in range(j + 1, n):
            re = sp.Rational((3 * j + 5 * k) % 7 - 3, 4)
            im = sp.Rational((2 * j + k) % 5 - 2, 3)
            h[j, k] = re + sp.I * im
            h[k, j] = re - sp.I * im
    lam = sp.symbols("lam")
    poly = sp.Poly(sp.expand((h - lam * sp.eye(n)).det(method="berkowitz")), lam)
    roots = sorted(sp.re(r) for r in poly.nroots(n=40, maxsteps=200))
    return roots


print("#pragma once")
print("// Generated by tests/oracles/frozen_values.py (mpmath/sympy).")
print()
print("namespace frozen {")
print()
for m in (1, 2, 3):
    print(f'inline constexpr const char* kMetallic{m} = "{s(metallic(m))}";')
    print(f'inline constexpr const char* kOmega{m} = "{s(omega(m))}";')
print(f'inline constexpr const char* kOmegaTurns1 = "{s(omega(1) / (2 * pi))}";')
print(f'inline constexpr const char* kSqrt2 = "{s(sqrt(2), 50)}";')
print(f'inline constexpr const char* kPi = "{s(pi, 50)}";')
print(f"inline constexpr double kBound[6] = {{0, 0, {', '.join(s(bound(d), 20) for d in range(2, 6))}}};")
print(f'inline constexpr const char* kBound2 = "{s(bound(2))}";')
xi2 = 1 / mpf(3)
print(f"inline constexpr double kLemmaD2 = {s(xi2 * (2 - 1 / sqrt(xi2)), 20)};")
f3000 = fib(3000)
print(f'inline constexpr const char* kFib3000Lead = "{nstr(f3000, 4)}";')
print(f"inline constexpr int kFib3000Digits = {len(str(int(f3000)))};")
print(f"inline constexpr double kCharpolyRoots[8] = {{{', '.join(s(r, 20) for r in test_matrix())}}};")
print()
print("}  // namespace frozen")
