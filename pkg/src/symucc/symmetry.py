"""Abelian point-group irrep algebra and the symmetry filter on excitation pools.

Irreps are 3-bit integers using the Molpro/FCIDUMP numbering shifted to zero
(label = ORBSYM - 1). In that encoding the direct product is bitwise XOR and 0
is the totally symmetric irrep.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ParseError
from .fermionics import Excitation
from .integrals import IntegralTable

IrrepLabel = int


@dataclasses.dataclass(frozen=True)
class PointGroup:
    name: str
    irrep_names: tuple[str, ...]

    @property
    def order(self) -> int:
        return len(self.irrep_names)

    def label(self, name: str) -> IrrepLabel:
        return self.irrep_names.index(name)

    def irrep_name(self, label: IrrepLabel) -> str:
        return self.irrep_names[label]


# Molpro irrep order for each Abelian group.
POINT_GROUPS = {
    g.name.lower(): g
    for g in (
        PointGroup("D2h", ("Ag", "B3u", "B2u", "B1g", "B1u", "B2g", "B3g", "Au")),
        PointGroup("C2v", ("A1", "B1", "B2", "A2")),
        PointGroup("C2h", ("Ag", "Au", "Bu", "Bg")),
        PointGroup("D2", ("A", "B3", "B2", "B1")),
        PointGroup("C2", ("A", "B")),
        PointGroup("Cs", ("A'", 'A"')),
        PointGroup("Ci", ("Ag", "Au")),
        PointGroup("C1", ("A",)),
    )
}

NON_ABELIAN = {"c3v", "c4v", "d3h", "d6h", "td", "oh", "d3d", "c3", "dinfh", "cinfv", "ih", "d4h"}


def point_group(name: str) -> PointGroup:
    key = name.strip().lower()
    if key in POINT_GROUPS:
        return POINT_GROUPS[key]
    if key in NON_ABELIAN:
        raise ValueError(f"{name} is not Abelian; use one of its Abelian subgroups")
    raise ValueError(f"unknown point group {name!r}; known: {sorted(g.name for g in POINT_GROUPS.values())}")


def irrep_product(a: IrrepLabel, b: IrrepLabel) -> IrrepLabel:
    return a ^ b


def orbital_irrep(table: IntegralTable, p: int) -> IrrepLabel:
    return table.orbsym[p] - 1


def excitation_irrep(exc: Excitation, table: IntegralTable) -> IrrepLabel:
    """Product of the irreps of every spatial orbital the excitation touches."""
    label = 0
    for p in exc.orbitals():
        label ^= table.orbsym[p] - 1
    return label


def filter_pool(pool: Sequence[Excitation], table: IntegralTable, target: IrrepLabel = 0) -> list[Excitation]:
    """Keep the excitations whose excited determinant has the reference irrep.

    ``target`` is the reference irrep; an excitation survives when
    ``target ^ excitation_irrep == target``, i.e. its own irrep is 0.
    """
    return [exc for exc in pool if irrep_product(target, excitation_irrep(exc, table)) == target]


def irrep_census(pool: Iterable[Excitation], table: IntegralTable, n_labels: int = 8) -> dict[IrrepLabel, tuple[int, int]]:
    singles = [0] * n_labels
    doubles = [0] * n_labels
    for exc in pool:
        label = excitation_irrep(exc, table)
        if exc.is_single:
            singles[label] += 1
        else:
            doubles[label] += 1
    return {k: (singles[k], doubles[k]) for k in range(n_labels)}


def check_orbsym(table: IntegralTable, group: PointGroup) -> None:
    bad = [s for s in table.orbsym if s > group.order]
    if bad:
        raise ParseError(f"ORBSYM labels {sorted(set(bad))} exceed the order {group.order} of {group.name}")


def read_orbsym(path) -> tuple[int, ...]:
    """Read a one-line whitespace/comma separated ORBSYM relabelling file."""
    text = Path(path).read_text()
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise ParseError(f"{path}: malformed orbsym labels") from exc


def subgroup_scan(
    table: IntegralTable,
    relabelings: Mapping[str, Sequence[int]],
    pool: Sequence[Excitation] | None = None,
) -> dict[str, int]:
    """Survivor counts of the full pool under several orbsym assignments.

    ``relabelings`` maps a group tag (e.g. ``"c2v"`` or ``"cs_xz"``) to the
    per-orbital labels of that subgroup.
    """
    from .fermionics import enumerate_pool

    if pool is None:
        pool = enumerate_pool(table)
    counts = {}
    for tag, labels in relabelings.items():
        relabelled = table.with_orbsym(labels)
        counts[tag] = len(filter_pool(pool, relabelled, 0))
    return counts


def group_of_tag(tag: str) -> PointGroup:
    """``'c2v_x'`` -> C2v; the suffix only names the orientation."""
    return point_group(tag.split("_")[0])
