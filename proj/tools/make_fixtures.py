#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures under fixtures/ (requires pyscf).

The C++ code never computes integrals; this script is the only place the
chemistry package is used. toy_1orb.fcidump is hand-written and not
regenerated here.
"""
import math
import pathlib

from pyscf import gto, scf
from pyscf.tools import fcidump

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def dump(name, atoms, charge, spin=0):
    mol = gto.M(atom=atoms, basis="sto-6g", charge=charge, spin=spin, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    fcidump.from_scf(mf, str(OUT / name), tol=1e-14)


def h2(r):
    return f"H 0 0 0; H 0 0 {r}"


def h3(r):
    # equilateral triangle with side r
    h = r * math.sqrt(3.0) / 2.0
    return f"H 0 0 0; H {r} 0 0; H {r / 2} {h} 0"


def main():
    OUT.mkdir(exist_ok=True)
    for r in (0.3, 0.5, 0.735, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5):
        dump(f"h2_{r:.3f}.fcidump", h2(r), 0)
    for r in (0.5, 0.9, 1.5, 2.0, 2.5):
        dump(f"h3p_{r:.3f}.fcidump", h3(r), 1)


if __name__ == "__main__":
    main()
