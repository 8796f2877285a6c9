"""Regenerates tests/oracles/risk_oracle.hpp: closed-form risks at beta = 0,
equal-risk calibrations and the modified RIC penalty, all at 50 digits."""
import mpmath as mp

mp.mp.dps = 50
phi = mp.npdf
tail = lambda z: mp.erfc(z / mp.sqrt(2)) / 2
R0 = lambda g: 2 * g * phi(g) + 2 * tail(g)
R1 = lambda g: -2 * g * phi(g) + 2 * (g * g + 1) * tail(g)

def calibrate(g1):
    target = R1(mp.mpf(g1))
    lo, hi = mp.mpf(0), mp.mpf(60)
    for _ in range(200):
        mid = (lo + hi) / 2
        if R0(mid) > target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2

def ric(p, k):
    return sum(2 * mp.log(mp.mpf(p) / q) for q in range(1, k + 1))

def c1():
    f = lambda g: mp.power(2, 2.5) * mp.exp(g * g / 4) / (g**6 + g**4) - g
    x = mp.findroot(lambda g: mp.diff(f, g), 5.7)
    return x, f(x)

out = []
out.append("// Generated by gen_risk_oracle.py (mpmath, 50 digits). Do not edit.")
out.append("#pragma once\n\nnamespace oracle {\n")
out.append(f"inline constexpr double kRiskL0AtZeroGamma1 = {mp.nstr(R0(1), 20)};")
out.append(f"inline constexpr double kRiskL1AtZeroGamma2 = {mp.nstr(R1(2), 20)};")
out.append(f"inline constexpr double kCalibratedGamma0For2 = {mp.nstr(calibrate(2), 20)};")
out.append(f"inline constexpr double kCalibratedGamma0For4 = {mp.nstr(calibrate(4), 20)};")
out.append(f"inline constexpr double kRicP1000K1 = {mp.nstr(ric(1000, 1), 20)};")
out.append(f"inline constexpr double kRicP1000K4 = {mp.nstr(ric(1000, 4), 20)};")
x, v = c1()
out.append(f"inline constexpr double kC1Argmin = {mp.nstr(x, 20)};")
out.append(f"inline constexpr double kC1Value = {mp.nstr(v, 20)};")
out.append("\n}  // namespace oracle")
print("\n".join(out))
