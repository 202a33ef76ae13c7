"""Data model for a three-component normal crossing configuration.

A configuration is the numerical shadow of a normal crossing variety
Y = Y1 u Y2 u Y3 of dimension three: three threefold components, the three
double surfaces along which they are glued, and the common triple curve.
Only lattice data is stored (Gram forms, divisor-class coordinates,
restriction matrices, Euler numbers), never varieties.

Index conventions, fixed throughout the package:

* surfaces are numbered opposite their missing component:
  D1 = Y2 ^ Y3,  D2 = Y3 ^ Y1,  D3 = Y1 ^ Y2;
* each surface stores its two restriction matrices in the adjacency order
  given by ``SURFACE_ADJACENCY`` (D1: from Y2 then Y3, cyclically);
* ``boundary_self`` on a surface D = Yj ^ Yk is the pair of self-restriction
  classes (the class of D as a divisor of Yj restricted to D, then the same
  from the Yk side), i.e. the two normal-bundle classes;
* the class of the triple curve on each surface is ``tau_class``.

The restriction-difference matrix maps ``(+) H2(Yi) -> (+) Pic(Di)`` by

    (x1, x2, x3) |-> (x2|D1 - x3|D1,  x3|D2 - x1|D2,  x1|D3 - x2|D3).

Its kernel computes h2 of the glued variety; two canonical elements of that
kernel for a semistable central fiber are the collective restrictions of the
component line bundles O(Y1) and O(Y2), returned by
``component_restriction_classes``.

Surface lattices may be proper sublattices of the full Picard lattice (for
the catalog: the span of ambient hyperplane restrictions).  Every formula in
this package is valid on the tracked sublattice; ``lattice_is_full`` records
whether kernel-based h2 counts may be trusted as the full second Betti number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .exactlat import (
    DimensionMismatch,
    IntersectionLattice,
    IntMatrix,
    RationalMatrix,
    Vec,
    kernel_dimension,
    mat_vec,
    make_lattice,
    vec_add,
    vec_sub,
    vec_zero,
)

# Surface i is Y_j ^ Y_k for (j, k) = SURFACE_ADJACENCY[i] (0-based component
# indices).  The order within each pair fixes the order of restriction
# matrices, boundary_self slots, and the signs in the restriction-difference
# matrix (+ first adjacent, - second adjacent).
SURFACE_ADJACENCY: tuple[tuple[int, int], ...] = ((1, 2), (2, 0), (0, 1))

SCHEMA_ID = "ncconfig/1"

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"
SEVERITY_NOTE = "note"


class ConfigError(Exception):
    """Invalid configuration data (construction-time)."""


class SchemaError(ConfigError):
    """Malformed serialized configuration."""


class InsufficientBasis(ConfigError):
    """Boundary divisor classes are not expressible in the declared bases."""


class MissingData(ConfigError):
    """An operation needs optional data the configuration does not carry."""


@dataclass(frozen=True, order=True)
class Diagnostic:
    """One validation finding, ordered by clause identifier."""

    clause: str
    severity: str
    target: str
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == SEVERITY_ERROR

    def as_dict(self) -> dict[str, str]:
        return {
            "clause": self.clause,
            "severity": self.severity,
            "target": self.target,
            "message": self.message,
        }


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


@dataclass(frozen=True)
class ComponentGeometry:
    """One threefold component: Euler number and tracked H2 data.

    ``ample`` holds the coordinates of the distinguished ample class H_i.
    ``boundary`` optionally holds the coordinates of the two boundary
    divisors (the double surfaces seen as divisors on this component),
    keyed by the other two component indices in increasing order.
    ``chern_numbers`` is the optional triple (H^3, c2.H, c1^2.H).
    """

    name: str
    euler: int
    h2_rank: int
    class_labels: tuple[str, ...]
    ample: Vec
    boundary: tuple[Vec, Vec] | None = None
    chern_numbers: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        if self.h2_rank < 1:
            raise ConfigError(f"component {self.name}: h2_rank must be positive")
        if len(self.class_labels) != self.h2_rank:
            raise ConfigError(
                f"component {self.name}: {len(self.class_labels)} labels for rank {self.h2_rank}"
            )
        if len(set(self.class_labels)) != self.h2_rank:
            raise ConfigError(f"component {self.name}: class labels must be distinct")
        if len(self.ample) != self.h2_rank:
            raise ConfigError(f"component {self.name}: ample class has wrong length")
        if self.boundary is not None:
            for b in self.boundary:
                if len(b) != self.h2_rank:
                    raise ConfigError(
                        f"component {self.name}: boundary class has wrong length"
                    )
        if self.chern_numbers is not None and self.chern_numbers[0] < 1:
            raise ConfigError(f"component {self.name}: H^3 must be at least 1")


@dataclass(frozen=True)
class SurfaceGeometry:
    """One double surface: lattice, distinguished classes, restrictions.

    ``restrictions`` are the two matrices sending the adjacent components'
    tracked H2 bases into this lattice, in adjacency order.
    """

    name: str
    lattice: IntersectionLattice
    canonical: Vec
    tau_class: Vec
    euler: int
    restrictions: tuple[IntMatrix, IntMatrix]
    boundary_self: tuple[Vec, Vec]

    def __post_init__(self) -> None:
        for label, v in (
            ("canonical", self.canonical),
            ("tau_class", self.tau_class),
            ("boundary_self[0]", self.boundary_self[0]),
            ("boundary_self[1]", self.boundary_self[1]),
        ):
            if len(v) != self.lattice.rank:
                raise ConfigError(f"surface {self.name}: {label} has wrong length")

    def restriction_shape_ok(self, slot: int, component: ComponentGeometry) -> bool:
        m = self.restrictions[slot]
        if len(m) != self.lattice.rank:
            return False
        return all(len(r) == component.h2_rank for r in m) or (self.lattice.rank == 0)


@dataclass(frozen=True)
class TripleCurve:
    """The triple intersection curve: Euler number and connectivity flag."""

    euler: int
    connected: bool


@dataclass(frozen=True)
class DualComplexInfo:
    """Shape of the dual complex and the resulting degeneration type."""

    dimension: int
    max_cells: int
    type_label: str

    _ROMAN = {0: "I", 1: "II", 2: "III"}

    def __post_init__(self) -> None:
        if self._ROMAN.get(self.dimension) != self.type_label:
            raise ConfigError(
                f"type label {self.type_label!r} does not encode dimension {self.dimension}"
            )


@dataclass(frozen=True)
class NCConfiguration:
    components: tuple[ComponentGeometry, ComponentGeometry, ComponentGeometry]
    surfaces: tuple[SurfaceGeometry, SurfaceGeometry, SurfaceGeometry]
    triple: TripleCurve
    h2_total: int | None = None
    lattice_is_full: bool = False
    provenance_notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.components) != 3 or len(self.surfaces) != 3:
            raise ConfigError("a configuration has exactly three components and surfaces")
        names = [c.name for c in self.components]
        if len(set(names)) != 3:
            raise ConfigError("component names must be distinct")

    def adjacent(self, surface_index: int) -> tuple[int, int]:
        return SURFACE_ADJACENCY[surface_index]

    def restriction(self, surface_index: int, component_index: int) -> IntMatrix:
        """Restriction matrix from a component into an adjacent surface."""
        adj = SURFACE_ADJACENCY[surface_index]
        if component_index not in adj:
            raise MissingData(
                f"component {self.components[component_index].name} is not adjacent "
                f"to surface {self.surfaces[surface_index].name}"
            )
        return self.surfaces[surface_index].restrictions[adj.index(component_index)]

    def restrict(self, surface_index: int, component_index: int, v: Vec) -> Vec:
        return mat_vec(self.restriction(surface_index, component_index), v)

    def hyperplane_on_surface(self, surface_index: int) -> Vec:
        """Restriction of the distinguished ample class to a surface.

        Taken from the first adjacent component; validation checks that both
        sides agree.
        """
        j, _ = SURFACE_ADJACENCY[surface_index]
        return self.restrict(surface_index, j, self.components[j].ample)

    def boundary_class(self, component_index: int, other_index: int) -> Vec:
        """Coordinates on component i of the double surface Y_other ^ Y_i."""
        comp = self.components[component_index]
        if comp.boundary is None:
            raise InsufficientBasis(
                f"component {comp.name} does not declare boundary divisor coordinates"
            )
        others = sorted(set(range(3)) - {component_index})
        return comp.boundary[others.index(other_index)]

    def total_rank(self) -> int:
        return sum(c.h2_rank for c in self.components)


# ---------------------------------------------------------------------------
# Validation


def _shape_diagnostics(config: NCConfiguration) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for i, surf in enumerate(config.surfaces):
        for slot, comp_idx in enumerate(SURFACE_ADJACENCY[i]):
            comp = config.components[comp_idx]
            if not surf.restriction_shape_ok(slot, comp):
                out.append(
                    Diagnostic(
                        clause="shape",
                        severity=SEVERITY_ERROR,
                        target=surf.name,
                        message=(
                            f"restriction from {comp.name} must be "
                            f"{surf.lattice.rank}x{comp.h2_rank}"
                        ),
                    )
                )
    return out


def validate(config: NCConfiguration) -> list[Diagnostic]:
    """Check every numerically checkable standing hypothesis.

    Structural clauses run first; cross-checks that presuppose coherent data
    (declared h2 versus kernel dimension, boundary-coordinate coherence) run
    only when no structural clause failed.  Hypotheses the numerical shadow
    cannot see (cohomology vanishing, connectivity of the double surfaces,
    the component-level anticanonical condition) are reported as notes.
    """
    diags: list[Diagnostic] = []
    diags.extend(_shape_diagnostics(config))

    # Clause (2): connectivity and curve type of the triple curve.
    if not config.triple.connected:
        diags.append(
            Diagnostic(
                clause="C3.1(2)",
                severity=SEVERITY_ERROR,
                target="triple",
                message="triple curve must be connected",
            )
        )
    if config.triple.euler > 2 or config.triple.euler % 2 != 0:
        diags.append(
            Diagnostic(
                clause="C3.1(2)",
                severity=SEVERITY_ERROR,
                target="triple",
                message=f"triple curve Euler number {config.triple.euler} is not that of a smooth connected curve",
            )
        )
    diags.append(
        Diagnostic(
            clause="C3.1(2)",
            severity=SEVERITY_NOTE,
            target="components",
            message="assumed, not checkable: H^1 and H^2 of each component structure sheaf vanish",
        )
    )
    diags.append(
        Diagnostic(
            clause="C3.1(2)",
            severity=SEVERITY_NOTE,
            target="surfaces",
            message="assumed, not checkable: H^1 and H^2 of each double-surface structure sheaf vanish",
        )
    )
    diags.append(
        Diagnostic(
            clause="C3.1(2)",
            severity=SEVERITY_NOTE,
            target="surfaces",
            message="assumed, not checkable: the double surfaces are connected",
        )
    )

    shapes_ok = not has_errors(diags)

    # Clause (3): the distinguished ample classes must restrict equally.
    if shapes_ok:
        for i, surf in enumerate(config.surfaces):
            j, k = SURFACE_ADJACENCY[i]
            left = config.restrict(i, j, config.components[j].ample)
            right = config.restrict(i, k, config.components[k].ample)
            if left != right:
                diags.append(
                    Diagnostic(
                        clause="C3.1(3)",
                        severity=SEVERITY_ERROR,
                        target=surf.name,
                        message=(
                            f"ample matching on {surf.name}: "
                            f"{config.components[j].name} restricts to {left}, "
                            f"{config.components[k].name} restricts to {right}"
                        ),
                    )
                )

    # Clause (4): on each surface the anticanonical condition restricts to
    # K_D = -tau; the component-level statement itself is not checkable.
    for surf in config.surfaces:
        if vec_add(surf.canonical, surf.tau_class) != vec_zero(surf.lattice.rank):
            diags.append(
                Diagnostic(
                    clause="C3.1(4)",
                    severity=SEVERITY_ERROR,
                    target=surf.name,
                    message=(
                        f"canonical class {surf.canonical} is not minus the triple-curve "
                        f"class {surf.tau_class} on {surf.name}"
                    ),
                )
            )
    diags.append(
        Diagnostic(
            clause="C3.1(4)",
            severity=SEVERITY_NOTE,
            target="components",
            message=(
                "assumed, not checkable: minus the sum of the boundary divisors is a "
                "canonical divisor of each component (only its surface restriction is checked)"
            ),
        )
    )

    # Smooth-curve parity of the triple-curve class on each surface.
    for surf in config.surfaces:
        s = _adjunction_sum(surf.tau_class, surf.canonical, surf.lattice)
        if s is None or s % 2 != 0:
            diags.append(
                Diagnostic(
                    clause="parity",
                    severity=SEVERITY_ERROR,
                    target=surf.name,
                    message=f"triple-curve class on {surf.name} fails smooth-curve adjunction parity",
                )
            )

    structural_ok = not has_errors(diags)

    if structural_ok and config.h2_total is not None:
        dim = kernel_dimension(restriction_difference_matrix(config))
        if config.lattice_is_full:
            if dim != config.h2_total:
                diags.append(
                    Diagnostic(
                        clause="h2-total",
                        severity=SEVERITY_ERROR,
                        target="configuration",
                        message=(
                            f"declared h2_total {config.h2_total} does not equal the "
                            f"kernel dimension {dim} of the restriction-difference matrix"
                        ),
                    )
                )
        else:
            diags.append(
                Diagnostic(
                    clause="h2-total",
                    severity=SEVERITY_NOTE,
                    target="configuration",
                    message=(
                        f"tracked lattices not declared complete; kernel dimension {dim} "
                        f"not required to match declared h2_total {config.h2_total}"
                    ),
                )
            )

    if structural_ok:
        diags.extend(_boundary_coherence(config))

    return sorted(diags)


def _adjunction_sum(c: Vec, k: Vec, lattice: IntersectionLattice) -> int | None:
    from .exactlat import pair

    try:
        return pair(c, c, lattice) + pair(c, k, lattice)
    except DimensionMismatch:
        return None


def _boundary_coherence(config: NCConfiguration) -> list[Diagnostic]:
    """Cross-check declared boundary coordinates against restriction data.

    On component Y_i the divisor Y_j ^ Y_i restricts to the self-class of
    that surface from the Y_i side, and to the triple-curve class on the
    other surface adjacent to Y_i.  Only runs when coordinates are declared.
    """
    out: list[Diagnostic] = []
    for i, comp in enumerate(config.components):
        if comp.boundary is None:
            continue
        for j in sorted(set(range(3)) - {i}):
            b = config.boundary_class(i, j)
            k = 3 - i - j
            # Surface Y_i ^ Y_j: expect the self-class from the Y_i side.
            s_ij = _surface_between(config, i, j)
            surf = config.surfaces[s_ij]
            slot = SURFACE_ADJACENCY[s_ij].index(i)
            expected_self = surf.boundary_self[slot]
            got = config.restrict(s_ij, i, b)
            if got != expected_self:
                out.append(
                    Diagnostic(
                        clause="coherence",
                        severity=SEVERITY_ERROR,
                        target=surf.name,
                        message=(
                            f"boundary divisor of {comp.name} toward "
                            f"{config.components[j].name} restricts to {got}, expected "
                            f"self-class {expected_self} on {surf.name}"
                        ),
                    )
                )
            # Surface Y_i ^ Y_k: expect the triple-curve class.
            s_ik = _surface_between(config, i, k)
            surf2 = config.surfaces[s_ik]
            got2 = config.restrict(s_ik, i, b)
            if got2 != surf2.tau_class:
                out.append(
                    Diagnostic(
                        clause="coherence",
                        severity=SEVERITY_ERROR,
                        target=surf2.name,
                        message=(
                            f"boundary divisor of {comp.name} toward "
                            f"{config.components[j].name} restricts to {got2} on "
                            f"{surf2.name}, expected the triple-curve class {surf2.tau_class}"
                        ),
                    )
                )
    return out


def _surface_between(config: NCConfiguration, i: int, j: int) -> int:
    """Index of the surface Y_i ^ Y_j (the one opposite the third component)."""
    return 3 - i - j


# ---------------------------------------------------------------------------
# The restriction-difference matrix and its canonical kernel classes


def restriction_difference_matrix(config: NCConfiguration) -> RationalMatrix:
    """Block matrix of pairwise restriction differences.

    Domain: the direct sum of the components' tracked H2 (columns grouped by
    component, in order).  Codomain: the direct sum of the surface lattices
    (rows grouped by surface).  Row block i carries + the restriction from
    the first adjacent component and - the restriction from the second.
    """
    col_offsets = [0]
    for comp in config.components:
        col_offsets.append(col_offsets[-1] + comp.h2_rank)
    total_cols = col_offsets[-1]

    rows: list[list[int]] = []
    for i, surf in enumerate(config.surfaces):
        j, k = SURFACE_ADJACENCY[i]
        r_plus = config.restriction(i, j)
        r_minus = config.restriction(i, k)
        comp_j, comp_k = config.components[j], config.components[k]
        if not (surf.restriction_shape_ok(0, config.components[j]) and surf.restriction_shape_ok(1, config.components[k])):
            raise MissingData(
                f"surface {surf.name}: restriction matrices have inconsistent shapes"
            )
        for r in range(surf.lattice.rank):
            row = [0] * total_cols
            for c in range(comp_j.h2_rank):
                row[col_offsets[j] + c] += r_plus[r][c]
            for c in range(comp_k.h2_rank):
                row[col_offsets[k] + c] -= r_minus[r][c]
            rows.append(row)
    if not rows:
        return RationalMatrix.zero(0, total_cols)
    return RationalMatrix.from_rows(rows)


def stack_component_vectors(config: NCConfiguration, parts: Sequence[Vec]) -> Vec:
    """Concatenate per-component coordinate vectors into a domain vector."""
    if len(parts) != 3:
        raise DimensionMismatch("expected one coordinate vector per component")
    out: list[int] = []
    for comp, p in zip(config.components, parts):
        if len(p) != comp.h2_rank:
            raise DimensionMismatch(
                f"vector of length {len(p)} for component {comp.name} of rank {comp.h2_rank}"
            )
        out.extend(p)
    return tuple(out)


def split_surface_vector(config: NCConfiguration, v: Sequence[Any]) -> tuple[tuple[Any, ...], ...]:
    """Split a codomain vector into its three per-surface slices."""
    out = []
    pos = 0
    for surf in config.surfaces:
        out.append(tuple(v[pos : pos + surf.lattice.rank]))
        pos += surf.lattice.rank
    if pos != len(v):
        raise DimensionMismatch("vector length does not match total surface rank")
    return tuple(out)


def component_restriction_classes(config: NCConfiguration) -> tuple[Vec, Vec]:
    """Collective restrictions of the first two component line bundles.

    For a normal crossing variety sitting inside a semistable family the
    bundle O(Y_i) restricts to zero on the total space, which pins its
    restriction to each component in terms of boundary divisors; the two
    resulting domain vectors span the rank-2 degenerate subspace of the cup
    form.  They lie in the kernel of the restriction-difference matrix
    exactly when the collective normal class vanishes; otherwise their images
    are (0, N(D2), -N(D3)) and (-N(D1), 0, N(D3)).
    """
    b = config.boundary_class
    e1 = stack_component_vectors(
        config,
        (
            vec_sub(vec_zero(config.components[0].h2_rank), vec_add(b(0, 1), b(0, 2))),
            b(1, 0),
            b(2, 0),
        ),
    )
    e2 = stack_component_vectors(
        config,
        (
            b(0, 1),
            vec_sub(vec_zero(config.components[1].h2_rank), vec_add(b(1, 0), b(1, 2))),
            b(2, 1),
        ),
    )
    return e1, e2


def dual_complex(config: Any) -> DualComplexInfo:
    """Dual complex: one triangle for three components.

    Summary records produced by base change carry their own dual complex,
    which is returned as is; anything else must be a three-component
    configuration.
    """
    info = getattr(config, "dual_complex", None)
    if isinstance(info, DualComplexInfo):
        return info
    if not isinstance(config, NCConfiguration):
        raise ConfigError("dual_complex expects a configuration or an expanded record")
    return DualComplexInfo(dimension=2, max_cells=1, type_label="III")


# ---------------------------------------------------------------------------
# JSON serialization (schema "ncconfig/1"); integers only


def _require(obj: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    return obj[key]


def _intval(x: Any, where: str) -> int:
    if type(x) is not int:
        raise SchemaError(f"{where}: expected integer, got {x!r}")
    return x


def _intvec(x: Any, where: str) -> Vec:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected list of integers, got {x!r}")
    return tuple(_intval(v, where) for v in x)


def _intmat(x: Any, where: str) -> IntMatrix:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected matrix, got {x!r}")
    rows = tuple(_intvec(r, where) for r in x)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise SchemaError(f"{where}: ragged matrix")
    return rows


def config_to_dict(config: NCConfiguration) -> dict[str, Any]:
    comps = []
    for i, c in enumerate(config.components):
        entry: dict[str, Any] = {
            "name": c.name,
            "euler": c.euler,
            "h2_rank": c.h2_rank,
            "class_labels": list(c.class_labels),
            "ample": list(c.ample),
        }
        if c.boundary is not None:
            others = sorted(set(range(3)) - {i})
            entry["boundary"] = {
                config.components[o].name: list(b) for o, b in zip(others, c.boundary)
            }
        if c.chern_numbers is not None:
            entry["chern_numbers"] = list(c.chern_numbers)
        comps.append(entry)

    surfs = []
    for i, s in enumerate(config.surfaces):
        j, k = SURFACE_ADJACENCY[i]
        surfs.append(
            {
                "name": s.name,
                "gram": [list(r) for r in s.lattice.gram],
                "basis_labels": list(s.lattice.basis_labels),
                "canonical": list(s.canonical),
                "tau_class": list(s.tau_class),
                "euler": s.euler,
                "restrictions": {
                    config.components[j].name: [list(r) for r in s.restrictions[0]],
                    config.components[k].name: [list(r) for r in s.restrictions[1]],
                },
                "boundary_self": [list(s.boundary_self[0]), list(s.boundary_self[1])],
            }
        )

    out: dict[str, Any] = {
        "schema": SCHEMA_ID,
        "components": comps,
        "surfaces": surfs,
        "triple": {"euler": config.triple.euler, "connected": config.triple.connected},
        "lattice_is_full": config.lattice_is_full,
    }
    if config.h2_total is not None:
        out["h2_total"] = config.h2_total
    if config.provenance_notes:
        out["notes"] = list(config.provenance_notes)
    return out


def config_from_dict(data: Mapping[str, Any]) -> NCConfiguration:
    if not isinstance(data, Mapping):
        raise SchemaError("configuration must be a JSON object")
    if data.get("schema") != SCHEMA_ID:
        raise SchemaError(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA_ID!r}")

    raw_comps = _require(data, "components", "configuration")
    raw_surfs = _require(data, "surfaces", "configuration")
    if not isinstance(raw_comps, list) or len(raw_comps) != 3:
        raise SchemaError("components must be a list of exactly three objects")
    if not isinstance(raw_surfs, list) or len(raw_surfs) != 3:
        raise SchemaError("surfaces must be a list of exactly three objects")

    names: list[str] = []
    for c in raw_comps:
        n = _require(c, "name", "component")
        if not isinstance(n, str):
            raise SchemaError("component name must be a string")
        names.append(n)
    if len(set(names)) != 3:
        raise SchemaError("component names must be distinct")

    components: list[ComponentGeometry] = []
    for i, c in enumerate(raw_comps):
        where = f"component {names[i]}"
        rank = _intval(_require(c, "h2_rank", where), where + ".h2_rank")
        labels = _require(c, "class_labels", where)
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise SchemaError(f"{where}: class_labels must be a list of strings")
        ample = (
            _intvec(c["ample"], where + ".ample") if "ample" in c else (1,) * rank
        )
        boundary = None
        if "boundary" in c:
            raw_b = c["boundary"]
            if not isinstance(raw_b, Mapping):
                raise SchemaError(f"{where}: boundary must map component names to vectors")
            others = sorted(set(range(3)) - {i})
            try:
                boundary = tuple(
                    _intvec(raw_b[names[o]], where + ".boundary") for o in others
                )
            except KeyError as exc:
                raise SchemaError(f"{where}: boundary missing entry for {exc.args[0]!r}")
        chern = None
        if "chern_numbers" in c:
            cn = _intvec(c["chern_numbers"], where + ".chern_numbers")
            if len(cn) != 3:
                raise SchemaError(f"{where}: chern_numbers must have three entries")
            chern = (cn[0], cn[1], cn[2])
        try:
            components.append(
                ComponentGeometry(
                    name=names[i],
                    euler=_intval(_require(c, "euler", where), where + ".euler"),
                    h2_rank=rank,
                    class_labels=tuple(labels),
                    ample=ample,
                    boundary=boundary,
                    chern_numbers=chern,
                )
            )
        except ConfigError as exc:
            raise SchemaError(str(exc))

    surfaces: list[SurfaceGeometry] = []
    for i, s in enumerate(raw_surfs):
        sname = _require(s, "name", "surface")
        where = f"surface {sname}"
        gram = _intmat(_require(s, "gram", where), where + ".gram")
        labels_raw = s.get("basis_labels")
        if labels_raw is not None and not (
            isinstance(labels_raw, list) and all(isinstance(x, str) for x in labels_raw)
        ):
            raise SchemaError(f"{where}: basis_labels must be a list of strings")
        try:
            lattice = make_lattice(gram, tuple(labels_raw) if labels_raw else None)
        except Exception as exc:
            raise SchemaError(f"{where}: invalid lattice: {exc}")
        raw_restr = _require(s, "restrictions", where)
        if not isinstance(raw_restr, Mapping):
            raise SchemaError(f"{where}: restrictions must map component names to matrices")
        j, k = SURFACE_ADJACENCY[i]
        try:
            restrictions = (
                _intmat(raw_restr[names[j]], where + ".restrictions"),
                _intmat(raw_restr[names[k]], where + ".restrictions"),
            )
        except KeyError as exc:
            raise SchemaError(
                f"{where}: restrictions must include adjacent component {exc.args[0]!r}"
            )
        raw_bs = _require(s, "boundary_self", where)
        if not isinstance(raw_bs, list) or len(raw_bs) != 2:
            raise SchemaError(f"{where}: boundary_self must be a pair of vectors")
        try:
            surfaces.append(
                SurfaceGeometry(
                    name=sname,
                    lattice=lattice,
                    canonical=_intvec(_require(s, "canonical", where), where + ".canonical"),
                    tau_class=_intvec(_require(s, "tau_class", where), where + ".tau_class"),
                    euler=_intval(_require(s, "euler", where), where + ".euler"),
                    restrictions=restrictions,
                    boundary_self=(
                        _intvec(raw_bs[0], where + ".boundary_self"),
                        _intvec(raw_bs[1], where + ".boundary_self"),
                    ),
                )
            )
        except ConfigError as exc:
            raise SchemaError(str(exc))

    raw_triple = _require(data, "triple", "configuration")
    connected = _require(raw_triple, "connected", "triple")
    if not isinstance(connected, bool):
        raise SchemaError("triple.connected must be a boolean")
    triple = TripleCurve(
        euler=_intval(_require(raw_triple, "euler", "triple"), "triple.euler"),
        connected=connected,
    )

    h2_total = None
    if "h2_total" in data:
        h2_total = _intval(data["h2_total"], "h2_total")
        if h2_total < 0:
            raise SchemaError("h2_total must be non-negative")
    lattice_is_full = data.get("lattice_is_full", False)
    if not isinstance(lattice_is_full, bool):
        raise SchemaError("lattice_is_full must be a boolean")
    notes = data.get("notes", [])
    if not isinstance(notes, list) or not all(isinstance(x, str) for x in notes):
        raise SchemaError("notes must be a list of strings")

    return NCConfiguration(
        components=tuple(components),
        surfaces=tuple(surfaces),
        triple=triple,
        h2_total=h2_total,
        lattice_is_full=lattice_is_full,
        provenance_notes=tuple(notes),
    )


def config_to_json(config: NCConfiguration) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=True)


def config_from_json(text: str) -> NCConfiguration:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}")
    return config_from_dict(data)
