"""Regenerate the FCIDUMP fixtures under ``fixtures/``.

Needs pyscf (not a runtime dependency of symucc). Every fixture is an RHF/STO-3G
calculation at a CCCBDB experimental equilibrium geometry, written with Molpro
ORBSYM labels for the highest Abelian point group the molecule supports.

    python scripts/make_fixtures.py [--out fixtures]
"""

from __future__ import annotations

import argparse
import math
import re
from pathlib import Path

import pyscf
from pyscf import gto, scf
from pyscf.tools import fcidump

# Axis-flip masks of the D2h operations, bit 0 = x, bit 1 = y, bit 2 = z.
# Molpro D2h labels are (x, y, z) parities, so the restriction of a D2h label
# to a subgroup is the parity of (label & op) for each subgroup generator.
C2Z, C2Y, C2X, INV, SXY, SXZ, SYZ = 0b011, 0b101, 0b110, 0b111, 0b100, 0b010, 0b001

# generators ordered so the resulting bits follow Molpro numbering in the subgroup
BEH2_SUBGROUPS = {
    "c1": [],
    "cs": [SXY],
    "cs_xz": [SXZ],
    "cs_yz": [SYZ],
    "ci": [INV],
    "c2": [C2Z],
    "c2_y": [C2Y],
    "c2_x": [C2X],
    "c2v": [SYZ, SXZ],
    "c2v_y": [SXY, SYZ],
    "c2v_x": [SXY, SXZ],
    "c2h": [SXY, C2Z],
    "c2h_y": [SXZ, C2Y],
    "c2h_x": [SYZ, C2X],
    "d2": [C2Y, C2X],
    "d2h": [SYZ, SXZ, SXY],
}


def h2o_geometry(r=0.9578, angle=104.48):
    half = math.radians(angle) / 2
    y, z = r * math.sin(half), r * math.cos(half)
    return f"O 0 0 0; H 0 {y:.6f} {z:.6f}; H 0 {-y:.6f} {z:.6f}"


def nh3_geometry(r=1.0124, hnh=None, axis_angle=None):
    """Pyramidal NH3; either the HNH angle or the z-N-H angle fixes the shape."""
    if axis_angle is None:
        c = math.cos(math.radians(hnh))
        polar = math.asin(math.sqrt((1 - c) / 1.5))
    else:
        polar = math.radians(180.0 - axis_angle)
    atoms = ["N 0 0 0"]
    for k in range(3):
        phi = math.radians(120 * k)
        atoms.append(
            f"H {r * math.sin(polar) * math.cos(phi):.6f} "
            f"{r * math.sin(polar) * math.sin(phi):.6f} {-r * math.cos(polar):.6f}"
        )
    return "; ".join(atoms), 180.0 - math.degrees(polar)


def ch4_geometry(r=1.087):
    d = r / math.sqrt(3)
    return (
        f"C 0 0 0; H {d:.6f} {d:.6f} {d:.6f}; H {-d:.6f} {-d:.6f} {d:.6f}; "
        f"H {-d:.6f} {d:.6f} {-d:.6f}; H {d:.6f} {-d:.6f} {-d:.6f}"
    )


def c2h4_geometry(rcc=1.339, rch=1.086, hch=117.6):
    half = math.radians(hch) / 2
    y, dz = rch * math.sin(half), rch * math.cos(half)
    z = rcc / 2
    return (
        f"C 0 0 {z:.6f}; C 0 0 {-z:.6f}; H 0 {y:.6f} {z + dz:.6f}; H 0 {-y:.6f} {z + dz:.6f}; "
        f"H 0 {y:.6f} {-z - dz:.6f}; H 0 {-y:.6f} {-z - dz:.6f}"
    )


def c2h4_axes(label):
    # pyscf puts C=C on z with the plane in yz; reported in the frame with the
    # plane in xy and C=C along y: new x = old y, new y = old z, new z = old x.
    x, y, z = label & 1, (label >> 1) & 1, (label >> 2) & 1
    return y | (z << 1) | (x << 2)


MOLECULES = {
    "h2": ("H 0 0 0; H 0 0 0.7414", "D2h", "r(H-H)=0.7414 A"),
    "h4": ("H 0 0 0; H 0 0 1.0; H 0 0 2.0; H 0 0 3.0", "D2h", "linear chain, r=1.0 A equal spacing"),
    "lih": ("Li 0 0 0; H 0 0 1.5949", "C2v", "r(Li-H)=1.5949 A"),
    "hf": ("H 0 0 0; F 0 0 0.9168", "C2v", "r(H-F)=0.9168 A"),
    "beh2": ("Be 0 0 0; H 0 0 1.3264; H 0 0 -1.3264", "D2h", "linear, r(Be-H)=1.3264 A"),
    "h2o": (h2o_geometry(), "C2v", "r(O-H)=0.9578 A, HOH=104.48 deg"),
    "nh3": (nh3_geometry(hnh=106.67)[0], "Cs", "r(N-H)=1.0124 A, HNH=106.67 deg"),
    "ch4": (ch4_geometry(), "D2", "tetrahedral, r(C-H)=1.087 A"),
    "c2h4": (c2h4_geometry(), "D2h", "r(C=C)=1.339 A, r(C-H)=1.086 A, HCH=117.6 deg"),
}

NH3_FLIP_ANGLES = [112.0, 108.0, 104.0, 100.0, 96.0, 92.0, 90.0]


def read_orbsym(path):
    header = Path(path).read_text().split("&END")[0]
    field = re.search(r"ORBSYM=([\d,\s]+)", header).group(1)
    return [int(v) for v in field.replace(",", " ").split()]


def rewrite_orbsym(path, orbsym):
    text = Path(path).read_text()
    head, body = text.split("&END", 1)
    head = re.sub(r"ORBSYM=[\d,\s]+", "ORBSYM=" + ",".join(map(str, orbsym)) + "\n  ", head)
    Path(path).write_text(head + "&END" + body)


def run_rhf(geometry, group):
    mol = gto.M(atom=geometry, basis="sto-3g", symmetry=group, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    if not mf.converged:
        raise RuntimeError(f"RHF did not converge for {geometry}")
    return mf


def write_sidecar(path, name, geometry, note, group, mf, extra=""):
    path.write_text(
        f"fixture: {name}\n"
        f"generator: pyscf {pyscf.__version__}, RHF/STO-3G, scripts/make_fixtures.py\n"
        f"geometry source: CCCBDB experimental equilibrium structure ({note}); "
        "coordinates below are approximations of that entry\n"
        f"geometry (Angstrom): {geometry}\n"
        f"point group for ORBSYM: {group} (Molpro irrep numbering)\n"
        f"RHF energy: {mf.e_tot:.10f} Eh\n" + extra
    )


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "fixtures"))
    args = parser.parse_args(argv)
    out = Path(args.out)
    (out / "nh3_flip").mkdir(parents=True, exist_ok=True)

    for name, (geometry, group, note) in MOLECULES.items():
        mf = run_rhf(geometry, group)
        target = out / f"{name}.fcidump"
        fcidump.from_scf(mf, str(target), tol=1e-14, molpro_orbsym=True)
        extra = ""
        if name == "c2h4":
            labels = [c2h4_axes(s - 1) + 1 for s in read_orbsym(target)]
            rewrite_orbsym(target, labels)
            extra = "ORBSYM axes: molecular plane xy, C=C along y (relabelled from pyscf's frame)\n"
        write_sidecar(out / f"{name}.source.txt", name, geometry, note, group, mf, extra)
        print(f"{name}: E_RHF={mf.e_tot:.8f} orbsym={read_orbsym(target)}")

    beh2 = [s - 1 for s in read_orbsym(out / "beh2.fcidump")]
    for tag, gens in BEH2_SUBGROUPS.items():
        labels = [
            1 + sum((bin(b & g).count("1") & 1) << k for k, g in enumerate(gens)) for b in beh2
        ]
        (out / f"beh2.{tag}.orbsym").write_text(" ".join(map(str, labels)) + "\n")

    for angle in NH3_FLIP_ANGLES:
        geometry, _ = nh3_geometry(axis_angle=angle)
        stem = f"nh3_{angle:05.1f}"
        target = out / "nh3_flip" / f"{stem}.fcidump"
        if abs(angle - 90.0) > 1e-9:
            mf = run_rhf(geometry, "Cs")
            fcidump.from_scf(mf, str(target), tol=1e-14, molpro_orbsym=True)
        else:
            # planar: pyscf would pick the molecular plane as the Cs mirror; keep the
            # vertical plane through one N-H instead, reached via C2v
            mf = run_rhf(geometry, "C2v")
            fcidump.from_scf(mf, str(target), tol=1e-14, molpro_orbsym=True)
            coords = mf.mol.atom_coords()
            vertical = SXZ if abs(coords[:, 0]).max() < 1e-8 else SYZ
            # C2v Molpro bits are (x, y) parities, i.e. the same masks as D2h
            rewrite_orbsym(target, [1 + (bin((s - 1) & vertical).count("1") & 1) for s in read_orbsym(target)])
        note = f"r(N-H)=1.0124 A held fixed, z-N-H angle {angle} deg (rigid scan, not DFT-relaxed)"
        write_sidecar(out / "nh3_flip" / f"{stem}.source.txt", stem, geometry, note, "Cs", mf)
        print(f"{stem}: E_RHF={mf.e_tot:.8f} orbsym={read_orbsym(out / 'nh3_flip' / f'{stem}.fcidump')}")


if __name__ == "__main__":
    main()
