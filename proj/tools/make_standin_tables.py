#!/usr/bin/env python3
"""Regenerates the stand-in spectral tables under data/.

atmosphere_standin.txt       zenith transmission rho_atm(lambda), 350-1150 nm
quasar_composite_standin.txt rest-frame quasar photon spectrum, 60-1200 nm

Both are coarse substitutes for radiative-transfer output and an empirical
composite spectrum; replace them with real tables when available.
"""
import math
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def atmosphere(nm):
    # smooth window rising from 0.6 in the near UV to 0.9 in the red
    base = 0.6 + 0.3 * (1.0 - math.exp(-(nm - 350.0) / 120.0))
    notches = [  # center, depth, sigma (nm)
        (687.0, 0.30, 2.0),   # O2 B band
        (720.0, 0.20, 8.0),   # H2O
        (760.0, 0.60, 3.0),   # O2 A band
        (820.0, 0.25, 10.0),  # H2O
        (940.0, 0.60, 20.0),  # H2O
        (1130.0, 0.50, 15.0), # H2O
    ]
    t = base
    for c, d, s in notches:
        t *= 1.0 - d * math.exp(-0.5 * ((nm - c) / s) ** 2)
    return max(0.0, min(1.0, t))


def quasar(nm):
    # photon-number continuum: f_nu ~ nu^-0.44 below 500 nm, nu^-2.45 above
    pivot = 500.0
    cont = (nm / pivot) ** -0.56 if nm < pivot else (nm / pivot) ** 1.45
    lya = 6.0 * math.exp(-0.5 * ((nm - 121.6) / 4.0) ** 2)
    civ = 2.0 * math.exp(-0.5 * ((nm - 154.9) / 4.0) ** 2)
    return cont * (1.0 + lya + civ)


def write(path, header, lo, hi, step, fn):
    n = int(round((hi - lo) / step))
    with open(path, "w") as f:
        f.write(f"# {header}\n")
        f.write("wavelength_nm value\n")
        for i in range(n + 1):
            x = lo + i * step
            f.write(f"{x:.1f} {fn(x):.8g}\n")


if __name__ == "__main__":
    write(DATA / "atmosphere_standin.txt",
          "stand-in zenith atmospheric transmission (generated by tools/make_standin_tables.py)",
          350.0, 1150.0, 1.0, atmosphere)
    write(DATA / "quasar_composite_standin.txt",
          "stand-in rest-frame composite quasar photon spectrum, arbitrary units "
          "(generated by tools/make_standin_tables.py)",
          60.0, 1200.0, 0.5, quasar)
