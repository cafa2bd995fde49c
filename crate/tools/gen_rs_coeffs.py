"""Taylor coefficients (in z = 1 - 2p) of the Riemann-Siegel correction
functions C0..C3, printed as Rust constant arrays.

    Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
    C0 = Psi
    C1 = -Psi'''/(96 pi^2)
    C2 = Psi''/(64 pi^2) + Psi^(6)/(18432 pi^4)
    C3 = -Psi'/(64 pi^2) - Psi^(5)/(3840 pi^4) - Psi^(9)/(5308416 pi^6)

Derivatives are with respect to p; d/dp = -2 d/dz.
"""
import sys
from mpmath import mp, mpf, cos, pi, taylor

mp.dps = 80
DEG = 90


def psi_z(z):
    # Psi written in z; removable singularities handled by mpmath's taylor
    # through a small offset-free formulation.
    p = (1 - z) / 2
    return cos(2 * pi * (p * p - p - mpf(1) / 16)) / cos(2 * pi * p)


# expand around a regular point: Psi is entire, but cos(pi z) vanishes at
# z = +-1/2, so take the series at z = 0 where both are regular.
coef = taylor(psi_z, 0, DEG + 10)


def deriv_p(c, k):
    """Series of d^k/dp^k Psi in z."""
    out = list(c)
    for _ in range(k):
        out = [(-2) * (i + 1) * out[i + 1] for i in range(len(out) - 1)]
    return out


def combo(terms):
    n = min(len(s) for _, s in terms)
    return [sum(w * s[i] for w, s in terms) for i in range(n)]


C0 = deriv_p(coef, 0)
C1 = combo([(-1 / (96 * pi**2), deriv_p(coef, 3))])
C2 = combo([(1 / (64 * pi**2), deriv_p(coef, 2)), (1 / (18432 * pi**4), deriv_p(coef, 6))])
C3 = combo([(-1 / (64 * pi**2), deriv_p(coef, 1)), (-1 / (3840 * pi**4), deriv_p(coef, 5)),
            (-1 / (5308416 * pi**6), deriv_p(coef, 9))])


def emit(name, c):
    # keep terms up to the last one that matters at |z| <= 1
    last = max(i for i, v in enumerate(c) if abs(v) > mpf(10) ** -22)
    # odd/even parity makes every other coefficient vanish; drop the
    # round-off residue left in those slots
    vals = [mp.nstr(c[i], 25, min_fixed=-1, max_fixed=1) if abs(c[i]) > mpf(10) ** -40 else "0.0"
            for i in range(last + 1)]
    print(f"const {name}: [f64; {last + 1}] = [")
    for v in vals:
        s = str(v)
        if "e" not in s and "." not in s:
            s += ".0"
        print(f"    {s},")
    print("];")


print("// Generated by tools/gen_rs_coeffs.py; do not edit.\n")
for name, c in [("C0_COEFFS", C0), ("C1_COEFFS", C1), ("C2_COEFFS", C2), ("C3_COEFFS", C3)]:
    emit(name, c)
