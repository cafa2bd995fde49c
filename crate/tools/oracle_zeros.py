"""First 100 zeta zero ordinates from mpmath, 20 decimals, one per line."""
from mpmath import mp, zetazero

mp.dps = 30
for n in range(1, 101):
    print(mp.nstr(zetazero(n).imag, 24, min_fixed=0, max_fixed=3))
