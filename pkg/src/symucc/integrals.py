"""Molecular-orbital integrals: FCIDUMP I/O and the closed-shell reference.

Two-electron integrals are in chemists' notation, (pq|rs). Indices are 0-based
spatial-orbital indices everywhere inside the package; the FCIDUMP text format
is 1-based.
"""

from __future__ import annotations

import dataclasses
import re
from collections.abc import Mapping
from functools import cached_property
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import ParseError, UnsupportedReference


def _pair(p: int, q: int) -> tuple[int, int]:
    return (p, q) if p >= q else (q, p)


def canonical_one_body(key: tuple[int, int]) -> tuple[int, int]:
    return _pair(*key)


def canonical_two_body(key: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    p, q, r, s = key
    pq, rs = _pair(p, q), _pair(r, s)
    if pq < rs:
        pq, rs = rs, pq
    return pq + rs


class SymmetricIntegrals(Mapping):
    """Read-only integral map storing one canonical key per symmetry class.

    Lookups accept any index tuple in the class, e.g. for the two-electron map
    all eight permutations of (pq|rs) resolve to the same entry.
    """

    def __init__(self, data: Mapping, canonical):
        self._canon = canonical
        self._data = {canonical(tuple(k)): float(v) for k, v in data.items()}

    def __getitem__(self, key):
        return self._data[self._canon(tuple(key))]

    def __iter__(self) -> Iterator:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, SymmetricIntegrals):
            return self._data == other._data
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __repr__(self):
        return f"{type(self).__name__}({len(self._data)} entries)"


@dataclasses.dataclass(frozen=True, eq=True)
class IntegralTable:
    n_spatial: int
    n_electrons: int
    core_energy: float
    orbsym: tuple[int, ...]
    one_body: SymmetricIntegrals
    two_body: SymmetricIntegrals
    ms2: int = 0

    def __post_init__(self):
        if len(self.orbsym) != self.n_spatial:
            raise ParseError(f"ORBSYM has {len(self.orbsym)} entries, expected NORB={self.n_spatial}")
        if any(not 1 <= s <= 8 for s in self.orbsym):
            raise ParseError(f"ORBSYM labels must lie in 1..8, got {list(self.orbsym)}")
        if self.ms2 != 0 or self.n_electrons % 2:
            raise UnsupportedReference(
                f"closed-shell input required (NELEC={self.n_electrons}, MS2={self.ms2})"
            )
        if self.n_electrons // 2 > self.n_spatial:
            raise ParseError(f"NELEC={self.n_electrons} does not fit in NORB={self.n_spatial}")

    @classmethod
    def from_arrays(cls, h1, eri, n_electrons, core_energy=0.0, orbsym=None, tol=0.0):
        """Build a table from a dense (n, n) h and (n, n, n, n) chemists' ERI tensor."""
        h1 = np.asarray(h1, dtype=float)
        eri = np.asarray(eri, dtype=float)
        n = h1.shape[0]
        one = {(p, q): h1[p, q] for p in range(n) for q in range(p + 1) if abs(h1[p, q]) > tol}
        two = {}
        for p in range(n):
            for q in range(p + 1):
                for r in range(n):
                    for s in range(r + 1):
                        if (p, q) >= (r, s) and abs(eri[p, q, r, s]) > tol:
                            two[(p, q, r, s)] = eri[p, q, r, s]
        return cls(
            n_spatial=n,
            n_electrons=int(n_electrons),
            core_energy=float(core_energy),
            orbsym=tuple(orbsym) if orbsym is not None else (1,) * n,
            one_body=SymmetricIntegrals(one, canonical_one_body),
            two_body=SymmetricIntegrals(two, canonical_two_body),
        )

    @property
    def n_occupied(self) -> int:
        return self.n_electrons // 2

    @property
    def n_virtual(self) -> int:
        return self.n_spatial - self.n_occupied

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    def h(self, p: int, q: int) -> float:
        return self.one_body.get((p, q), 0.0)

    def g(self, p: int, q: int, r: int, s: int) -> float:
        return self.two_body.get((p, q, r, s), 0.0)

    @cached_property
    def h1(self) -> np.ndarray:
        n = self.n_spatial
        out = np.zeros((n, n))
        for (p, q), v in self.one_body.items():
            out[p, q] = out[q, p] = v
        out.flags.writeable = False
        return out

    @cached_property
    def eri(self) -> np.ndarray:
        """Dense chemists' tensor eri[p, q, r, s] = (pq|rs)."""
        n = self.n_spatial
        out = np.zeros((n, n, n, n))
        for (p, q, r, s), v in self.two_body.items():
            for a, b in ((p, q), (q, p)):
                for c, d in ((r, s), (s, r)):
                    out[a, b, c, d] = out[c, d, a, b] = v
        out.flags.writeable = False
        return out

    def with_orbsym(self, orbsym) -> "IntegralTable":
        """Same integrals with a different irrep labelling (e.g. a subgroup)."""
        orbsym = tuple(int(s) for s in orbsym)
        if len(orbsym) != self.n_spatial:
            raise ParseError(f"orbsym relabelling has {len(orbsym)} entries, expected {self.n_spatial}")
        return dataclasses.replace(self, orbsym=orbsym)


@dataclasses.dataclass(frozen=True)
class ReferenceDeterminant:
    occupied_spatial: tuple[int, ...]
    irrep: int

    def spin_orbitals(self) -> tuple[int, ...]:
        return tuple(2 * i + s for i in self.occupied_spatial for s in (0, 1))


# --------------------------------------------------------------------- parsing

_HEADER_END = re.compile(r"&END|^\s*/\s*$", re.IGNORECASE | re.MULTILINE)
_KEY = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=")


def _parse_header(header: str) -> dict[str, list[int]]:
    header = re.sub(r"^\s*&FCI", "", header.strip(), flags=re.IGNORECASE)
    fields = {}
    matches = list(_KEY.finditer(header))
    if not matches:
        raise ParseError("FCIDUMP header has no KEY=value fields")
    for m, nxt in zip(matches, matches[1:] + [None]):
        raw = header[m.end() : nxt.start() if nxt else len(header)]
        tokens = [t for t in re.split(r"[,\s]+", raw) if t]
        try:
            fields[m.group(1).upper()] = [int(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(f"malformed value for {m.group(1)}: {raw.strip()!r}") from exc
    return fields


def _scalar(fields, key, default=None):
    if key not in fields:
        if default is None:
            raise ParseError(f"FCIDUMP header is missing {key}")
        return default
    if len(fields[key]) != 1:
        raise ParseError(f"{key} expects a single value, got {fields[key]}")
    return fields[key][0]


def parse_fcidump(text: str | bytes) -> IntegralTable:
    """Parse Molpro-convention FCIDUMP text into an :class:`IntegralTable`.

    Entries for symmetry-equivalent index tuples overwrite each other, last wins.
    Lines of the form ``e i 0 0 0`` (orbital energies) are skipped.
    """
    if isinstance(text, bytes):
        text = text.decode()
    if not re.match(r"\s*&FCI", text, re.IGNORECASE):
        raise ParseError("FCIDUMP must start with an &FCI namelist")
    end = _HEADER_END.search(text)
    if end is None:
        raise ParseError("FCIDUMP header is not terminated by &END or /")
    fields = _parse_header(text[: end.start()])
    norb = _scalar(fields, "NORB")
    nelec = _scalar(fields, "NELEC")
    ms2 = _scalar(fields, "MS2", 0)
    if norb <= 0 or nelec < 0:
        raise ParseError(f"invalid NORB={norb} / NELEC={nelec}")
    orbsym = tuple(fields.get("ORBSYM", [1] * norb))
    if len(orbsym) != norb:
        raise ParseError(f"ORBSYM has {len(orbsym)} entries, expected NORB={norb}")
    if nelec % 2 or ms2 != 0:
        raise UnsupportedReference(f"closed-shell input required (NELEC={nelec}, MS2={ms2})")

    core = 0.0
    one: dict = {}
    two: dict = {}
    for lineno, line in enumerate(text[end.end() :].splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise ParseError(f"integral line {lineno}: expected 'value i j k l', got {line!r}")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(t) for t in parts[1:])
        except ValueError as exc:
            raise ParseError(f"integral line {lineno}: {line!r}") from exc
        if any(not 0 <= x <= norb for x in (i, j, k, l)):
            raise ParseError(f"integral line {lineno}: index out of [1, {norb}] in {line!r}")
        if i == j == k == l == 0:
            core = value
        elif k == l == 0:
            if j == 0:
                continue  # orbital energy
            one[canonical_one_body((i - 1, j - 1))] = value
        elif 0 in (i, j, k, l):
            raise ParseError(f"integral line {lineno}: invalid index pattern in {line!r}")
        else:
            two[canonical_two_body((i - 1, j - 1, k - 1, l - 1))] = value

    return IntegralTable(
        n_spatial=norb,
        n_electrons=nelec,
        ms2=ms2,
        core_energy=core,
        orbsym=orbsym,
        one_body=SymmetricIntegrals(one, canonical_one_body),
        two_body=SymmetricIntegrals(two, canonical_two_body),
    )


def read_fcidump(path) -> IntegralTable:
    return parse_fcidump(Path(path).read_text())


def write_fcidump(table: IntegralTable) -> str:
    """Serialize to FCIDUMP text; ``parse_fcidump`` of the result equals ``table``."""
    lines = [
        f" &FCI NORB={table.n_spatial},NELEC={table.n_electrons},MS2={table.ms2},",
        "  ORBSYM=" + ",".join(str(s) for s in table.orbsym) + ",",
        "  ISYM=1,",
        " &END",
    ]
    for (p, q, r, s), v in sorted(table.two_body.items(), reverse=True):
        lines.append(f"{v!r} {p + 1} {q + 1} {r + 1} {s + 1}")
    for (p, q), v in sorted(table.one_body.items(), reverse=True):
        lines.append(f"{v!r} {p + 1} {q + 1} 0 0")
    lines.append(f"{table.core_energy!r} 0 0 0 0")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- reference


def reference_determinant(table: IntegralTable) -> ReferenceDeterminant:
    """Closed-shell reference occupying the first ``n_electrons/2`` orbitals."""
    occ = tuple(range(table.n_occupied))
    irrep = 0
    for i in occ:
        bits = table.orbsym[i] - 1
        irrep ^= bits ^ bits  # alpha and beta
    return ReferenceDeterminant(occupied_spatial=occ, irrep=irrep)


def hf_energy(table: IntegralTable) -> float:
    occ = np.arange(table.n_occupied)
    h, eri = table.h1, table.eri
    coulomb = eri[np.ix_(occ, occ, occ, occ)]
    j = np.einsum("iijj->", coulomb)
    k = np.einsum("ijji->", coulomb)
    return float(table.core_energy + 2.0 * h[occ, occ].sum() + 2.0 * j - k)
