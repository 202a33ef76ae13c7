"""Collective normal divisors and the sequential blow-up transform.

Given a configuration Y whose collective normal class is represented by an
explicit curve system {C1, C2, C3} (one divisor per double surface, each a
sum of alpha smooth curve classes with matched triple-curve intersections),
the transform blows components up along those curves in a fixed order:

    1. component 1 along the alpha curves of C2 on D2,
    2. component 2 along the alpha curves of C1 on D1,
    3. component 1 again along the proper transforms of the C3 curves,
       which now live on the blown-up third surface.

The output configuration has trivial collective normal class, hence is
d-semistable by the triple point formula.  All bookkeeping is exact:

* a blow-up along a curve of Euler number x adds x to the component's Euler
  number; the third surface gains one point per triple-curve intersection
  (gamma = sum of the per-curve counts), so e(D3~) = e(D3) + gamma;
* the third surface's lattice gains gamma pairwise-orthogonal (-1)-classes;
  pullback classes keep their coordinates and the triple-curve, canonical
  and self classes pick up the standard exceptional corrections;
* each component's tracked H2 gains one class per exceptional divisor, and
  the restriction matrices are extended with the true restrictions of those
  classes (the center's class on the surface it sits on, indicator vectors
  of exceptional points on the blown-up surface, zero elsewhere);
* the declared h2 of the configuration grows by exactly 2*alpha.

Order matters for the construction (the trace records it) but not for any
of the smoothing invariants computed downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import degeneration
from .exactlat import (
    IntersectionLattice,
    IntMatrix,
    RationalMatrix,
    Vec,
    adjunction_euler,
    pair,
    vec_sub,
    vec_sum,
    vec_zero,
)
from .ncconfig import (
    SEVERITY_ERROR,
    SEVERITY_WARNING,
    ComponentGeometry,
    Diagnostic,
    NCConfiguration,
    SurfaceGeometry,
    has_errors,
)


class AdmissibilityError(Exception):
    """A collective divisor failed its admissibility checks."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.message for d in diagnostics if d.is_error))


class AmpleMarginError(Exception):
    """An intersection table violates the sequential blow-up shape."""


@dataclass(frozen=True)
class CollectiveDivisor:
    """Blow-up data: alpha curve classes on each surface, with matched counts.

    ``components[i][l]`` is the class of the l-th curve on surface i;
    ``tau_multiplicities[l]`` is the common number of points in which the
    l-th curve of every C_i meets the triple curve.  ``g_witness_present``
    attests that matching divisors exist on the components themselves (the
    projectivity witnesses); it is an attestation, not computed data.
    """

    alpha: int
    components: tuple[tuple[Vec, ...], tuple[Vec, ...], tuple[Vec, ...]]
    tau_multiplicities: tuple[int, ...]
    g_witness_present: bool = True

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        for i, comps in enumerate(self.components):
            if len(comps) != self.alpha:
                raise ValueError(
                    f"surface {i + 1} carries {len(comps)} curve classes, expected alpha={self.alpha}"
                )
        if len(self.tau_multiplicities) != self.alpha:
            raise ValueError("one triple-curve multiplicity is required per curve")
        if any(m < 0 for m in self.tau_multiplicities):
            raise ValueError("triple-curve multiplicities must be non-negative")

    @property
    def gamma(self) -> int:
        return sum(self.tau_multiplicities)


@dataclass(frozen=True)
class BlowupStep:
    component: str
    center: str
    surface: str
    degree: int
    euler: int

    def as_dict(self) -> dict[str, int | str]:
        return {
            "component": self.component,
            "center": self.center,
            "surface": self.surface,
            "degree": self.degree,
            "euler": self.euler,
        }


@dataclass(frozen=True)
class BlowupTrace:
    """Ordered log of the 3*alpha blow-up steps and the classes they create."""

    steps: tuple[BlowupStep, ...]
    exceptional_classes: tuple[str, ...]
    kernel_classes: tuple[str, ...]

    def as_dict(self) -> dict[str, object]:
        return {
            "steps": [s.as_dict() for s in self.steps],
            "exceptional_classes": list(self.exceptional_classes),
            "kernel_classes": list(self.kernel_classes),
        }


def check_collective_divisor(
    config: NCConfiguration, divisor: CollectiveDivisor
) -> list[Diagnostic]:
    """Admissibility of a collective divisor against a configuration.

    Checks, per surface i and curve index l:

    (a) the curve classes sum to the collective normal class of the surface;
    (b) the declared triple-curve multiplicity equals the intersection
        number of each curve class with the triple-curve class;
    (c) the projectivity witnesses are attested (warning otherwise);
    (d) each curve class has even adjunction sum (smooth-curve parity).
    """
    diags: list[Diagnostic] = []
    normal = degeneration.collective_normal_class(config)
    for i, surf in enumerate(config.surfaces):
        classes = divisor.components[i]
        bad_len = [c for c in classes if len(c) != surf.lattice.rank]
        if bad_len:
            diags.append(
                Diagnostic(
                    clause="CD(shape)",
                    severity=SEVERITY_ERROR,
                    target=surf.name,
                    message=f"curve classes on {surf.name} must have length {surf.lattice.rank}",
                )
            )
            continue
        total = vec_sum(classes, surf.lattice.rank)
        if total != normal.classes[i]:
            diags.append(
                Diagnostic(
                    clause="CD(a)",
                    severity=SEVERITY_ERROR,
                    target=surf.name,
                    message=(
                        f"curve classes on {surf.name} sum to {total}, but the "
                        f"collective normal class there is {normal.classes[i]}"
                    ),
                )
            )
        for l, c in enumerate(classes):
            m = pair(c, surf.tau_class, surf.lattice)
            if m != divisor.tau_multiplicities[l]:
                diags.append(
                    Diagnostic(
                        clause="CD(b)",
                        severity=SEVERITY_ERROR,
                        target=surf.name,
                        message=(
                            f"curve {l + 1} on {surf.name} meets the triple curve in "
                            f"{m} points, declared multiplicity is "
                            f"{divisor.tau_multiplicities[l]}"
                        ),
                    )
                )
            s = pair(c, c, surf.lattice) + pair(c, surf.canonical, surf.lattice)
            if s % 2 != 0:
                diags.append(
                    Diagnostic(
                        clause="CD(d)",
                        severity=SEVERITY_ERROR,
                        target=surf.name,
                        message=(
                            f"curve {l + 1} on {surf.name} has odd adjunction sum {s}; "
                            f"no smooth curve carries this class"
                        ),
                    )
                )
    if not divisor.g_witness_present:
        diags.append(
            Diagnostic(
                clause="CD(c)",
                severity=SEVERITY_WARNING,
                target="divisor",
                message="no projectivity witnesses attested; the blown-up variety may not be projective",
            )
        )
    return sorted(diags)


def center_degree(config: NCConfiguration, surface_index: int, c: Vec) -> int:
    h = config.hyperplane_on_surface(surface_index)
    return pair(c, h, config.surfaces[surface_index].lattice)


def center_euler(config: NCConfiguration, surface_index: int, c: Vec) -> int:
    surf = config.surfaces[surface_index]
    return adjunction_euler(c, surf.canonical, surf.lattice)


def _pad(v: Vec, extra: int) -> Vec:
    return v + (0,) * extra


def _extend_columns(m: IntMatrix, new_cols: Sequence[Vec], rank: int) -> IntMatrix:
    """Append column vectors (given as lattice vectors) to a restriction matrix."""
    rows = [list(r) for r in m] if m else [[] for _ in range(rank)]
    for col in new_cols:
        for r in range(rank):
            rows[r].append(col[r])
    return tuple(tuple(r) for r in rows)


def sequential_blowup(
    config: NCConfiguration, divisor: CollectiveDivisor
) -> tuple[NCConfiguration, BlowupTrace]:
    """Blow up along a collective divisor; the result is d-semistable.

    Refuses divisors that fail :func:`check_collective_divisor`.  With
    ``alpha == 0`` (legal only when the collective normal class already
    vanishes) the configuration is returned unchanged.
    """
    diags = check_collective_divisor(config, divisor)
    if has_errors(diags):
        raise AdmissibilityError(diags)

    if divisor.alpha == 0:
        return config, BlowupTrace(steps=(), exceptional_classes=(), kernel_classes=())

    alpha = divisor.alpha
    mults = divisor.tau_multiplicities
    gamma = divisor.gamma
    c_on = divisor.components  # c_on[i][l]: class of curve l on surface i
    comp0, comp1, comp2 = config.components
    s0, s1, s2 = config.surfaces

    # Exceptional points on the blown-up third surface, grouped by curve index.
    offsets = []
    pos = 0
    for m in mults:
        offsets.append(pos)
        pos += m
    group = [range(offsets[l], offsets[l] + mults[l]) for l in range(alpha)]

    def indicator(l: int, sign: int) -> Vec:
        v = [0] * gamma
        for p in group[l]:
            v[p] = sign
        return tuple(v)

    # --- trace ------------------------------------------------------------
    steps: list[BlowupStep] = []
    for l in range(alpha):
        steps.append(
            BlowupStep(
                component=comp0.name,
                center=f"c[{l + 1},2]",
                surface=s1.name,
                degree=center_degree(config, 1, c_on[1][l]),
                euler=center_euler(config, 1, c_on[1][l]),
            )
        )
    for l in range(alpha):
        steps.append(
            BlowupStep(
                component=comp1.name,
                center=f"c[{l + 1},1]",
                surface=s0.name,
                degree=center_degree(config, 0, c_on[0][l]),
                euler=center_euler(config, 0, c_on[0][l]),
            )
        )
    for l in range(alpha):
        steps.append(
            BlowupStep(
                component=comp0.name,
                center=f"c'[{l + 1},3]",
                surface=s2.name,
                degree=center_degree(config, 2, c_on[2][l]),
                euler=center_euler(config, 2, c_on[2][l]),
            )
        )
    exc_labels = (
        tuple(f"E[{l + 1},2]" for l in range(alpha))
        + tuple(f"E[{l + 1},1]" for l in range(alpha))
        + tuple(f"E'[{l + 1},3]" for l in range(alpha))
    )
    kernel_labels = tuple(f"E[{l + 1}]" for l in range(alpha)) + tuple(
        f"E'[{l + 1}]" for l in range(alpha)
    )
    trace = BlowupTrace(
        steps=tuple(steps),
        exceptional_classes=exc_labels,
        kernel_classes=kernel_labels,
    )

    # --- components --------------------------------------------------------
    labels_e2 = tuple(f"E[{l + 1},2]" for l in range(alpha))
    labels_e3 = tuple(f"E'[{l + 1},3]" for l in range(alpha))
    labels_e1 = tuple(f"E[{l + 1},1]" for l in range(alpha))

    chern0 = comp0.chern_numbers
    if chern0 is not None:
        for l in range(alpha):
            chern0 = transport_chern(chern0, center_degree(config, 1, c_on[1][l]))
        for l in range(alpha):
            chern0 = transport_chern(chern0, center_degree(config, 2, c_on[2][l]))
    chern1 = comp1.chern_numbers
    if chern1 is not None:
        for l in range(alpha):
            chern1 = transport_chern(chern1, center_degree(config, 0, c_on[0][l]))

    new_comp0 = ComponentGeometry(
        name=comp0.name,
        euler=comp0.euler
        + sum(center_euler(config, 1, c) for c in c_on[1])
        + sum(center_euler(config, 2, c) for c in c_on[2]),
        h2_rank=comp0.h2_rank + 2 * alpha,
        class_labels=comp0.class_labels + labels_e2 + labels_e3,
        ample=_pad(comp0.ample, 2 * alpha),
        boundary=None
        if comp0.boundary is None
        else (
            # toward component 1 (surface D3): proper transform subtracts the
            # stage-two exceptional divisors
            comp0.boundary[0] + (0,) * alpha + (-1,) * alpha,
            # toward component 2 (surface D2): subtracts the stage-one ones
            comp0.boundary[1] + (-1,) * alpha + (0,) * alpha,
        ),
        chern_numbers=chern0,
    )
    new_comp1 = ComponentGeometry(
        name=comp1.name,
        euler=comp1.euler + sum(center_euler(config, 0, c) for c in c_on[0]),
        h2_rank=comp1.h2_rank + alpha,
        class_labels=comp1.class_labels + labels_e1,
        ample=_pad(comp1.ample, alpha),
        boundary=None
        if comp1.boundary is None
        else (
            # toward component 0 (surface D3): centers meet it only in points
            comp1.boundary[0] + (0,) * alpha,
            # toward component 2 (surface D1): centers lie on it
            comp1.boundary[1] + (-1,) * alpha,
        ),
        chern_numbers=chern1,
    )
    new_comp2 = comp2

    # --- surfaces -----------------------------------------------------------
    total_c = [vec_sum(c_on[i], config.surfaces[i].lattice.rank) for i in range(3)]

    # D1 = Y2 ^ Y3: the C1 centers are blown up inside Y2 (adjacency slot 0).
    new_s0 = SurfaceGeometry(
        name=s0.name,
        lattice=s0.lattice,
        canonical=s0.canonical,
        tau_class=s0.tau_class,
        euler=s0.euler,
        restrictions=(
            _extend_columns(s0.restrictions[0], c_on[0], s0.lattice.rank),
            s0.restrictions[1],
        ),
        boundary_self=(vec_sub(s0.boundary_self[0], total_c[0]), s0.boundary_self[1]),
    )
    # D2 = Y3 ^ Y1: the C2 centers are blown up inside Y1 (adjacency slot 1).
    new_s1 = SurfaceGeometry(
        name=s1.name,
        lattice=s1.lattice,
        canonical=s1.canonical,
        tau_class=s1.tau_class,
        euler=s1.euler,
        restrictions=(
            s1.restrictions[0],
            _extend_columns(
                s1.restrictions[1],
                list(c_on[1]) + [vec_zero(s1.lattice.rank)] * alpha,
                s1.lattice.rank,
            ),
        ),
        boundary_self=(s1.boundary_self[0], vec_sub(s1.boundary_self[1], total_c[1])),
    )
    # D3 = Y1 ^ Y2: blown up at the gamma triple-curve points.
    eps_labels = tuple(f"eps[{p + 1}]" for p in range(gamma))
    old_rank = s2.lattice.rank
    new_gram = tuple(
        tuple(s2.lattice.gram[r]) + (0,) * gamma for r in range(old_rank)
    ) + tuple(
        (0,) * old_rank + tuple(-1 if q == p else 0 for q in range(gamma))
        for p in range(gamma)
    )
    new_lattice = IntersectionLattice(
        rank=old_rank + gamma,
        gram=new_gram,
        basis_labels=s2.lattice.basis_labels + eps_labels,
    )
    eps_all_pos = (1,) * gamma
    eps_all_neg = (-1,) * gamma

    def widen_rows(m: IntMatrix, n_cols: int) -> IntMatrix:
        """Add gamma zero rows (the exceptional point classes) below ``m``."""
        return tuple(tuple(r) for r in m) + tuple((0,) * n_cols for _ in range(gamma))

    # Columns of the extended restriction from component 0: pullbacks keep
    # their coordinates (zero on the exceptional points); E[l,2] restricts to
    # the exceptional points over its curve; E'[l,3] restricts to the proper
    # transform of the corresponding C3 curve.
    cols_e2 = [(0,) * old_rank + indicator(l, 1) for l in range(alpha)]
    cols_e3 = [c_on[2][l] + indicator(l, -1) for l in range(alpha)]
    new_r20 = _extend_columns(
        widen_rows(s2.restrictions[0], comp0.h2_rank), cols_e2 + cols_e3, old_rank + gamma
    )
    cols_e1 = [(0,) * old_rank + indicator(l, 1) for l in range(alpha)]
    new_r21 = _extend_columns(
        widen_rows(s2.restrictions[1], comp1.h2_rank), cols_e1, old_rank + gamma
    )
    new_s2 = SurfaceGeometry(
        name=s2.name,
        lattice=new_lattice,
        canonical=s2.canonical + eps_all_pos,
        tau_class=s2.tau_class + eps_all_neg,
        euler=s2.euler + gamma,
        restrictions=(new_r20, new_r21),
        boundary_self=(
            vec_sub(s2.boundary_self[0], total_c[2]) + eps_all_pos,
            s2.boundary_self[1] + (0,) * gamma,
        ),
    )

    new_config = NCConfiguration(
        components=(new_comp0, new_comp1, new_comp2),
        surfaces=(new_s0, new_s1, new_s2),
        triple=config.triple,
        h2_total=None if config.h2_total is None else config.h2_total + 2 * alpha,
        lattice_is_full=config.lattice_is_full,
        provenance_notes=config.provenance_notes
        + (
            f"sequential blow-up applied: alpha={alpha}, gamma={gamma}",
            "assumed, not checkable: the blow-up centers are pairwise disjoint "
            "irreducible smooth curves meeting the triple curve transversely",
        ),
    )
    return new_config, trace


def transport_chern(n: tuple[int, int, int], degree: int) -> tuple[int, int, int]:
    """Chern pairings of a distinguished class across one curve blow-up.

    The pullback class keeps its cube; pairing with c2 grows by the center's
    degree and pairing with c1^2 drops by the same amount.
    """
    if degree < 0:
        raise ValueError("center degree must be non-negative")
    h3, c2h, c1sqh = n
    return (h3, c2h + degree, c1sqh - degree)


def extend_restriction_matrix(
    m: RationalMatrix, alpha: int, gamma: int = 0
) -> RationalMatrix:
    """Extend a restriction-difference matrix by a blow-up with alpha curves.

    Appends, per curve, the two canonical kernel classes as fresh domain
    columns with zero image, and ``gamma`` codomain rows (the exceptional
    point classes on the blown-up surface) on which every old column
    vanishes.  The kernel dimension grows by exactly ``2 * alpha``.
    """
    if alpha < 0 or gamma < 0:
        raise ValueError("alpha and gamma must be non-negative")
    if alpha == 0 and gamma == 0:
        return m
    zero = Fraction(0)
    rows = [r + (zero,) * (2 * alpha) for r in m.entries]
    for _ in range(gamma):
        rows.append((zero,) * (m.cols + 2 * alpha))
    return RationalMatrix(rows=m.rows + gamma, cols=m.cols + 2 * alpha, entries=tuple(rows))


# ---------------------------------------------------------------------------
# Relative ampleness margins for sequential blow-ups


@dataclass(frozen=True)
class AmpleMarginProblem:
    """Intersection table of exceptional divisors against fiber curves.

    ``table[l][l']`` is the intersection of the l'-th exceptional divisor
    with a representative fiber curve of the l-th blow-up (0-based).  A
    valid table has -1 on the diagonal, zeros before it in each row, and
    non-negative entries after it.
    """

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.table)
        if k == 0:
            raise AmpleMarginError("the table must have at least one row")
        for row in self.table:
            if len(row) != k:
                raise AmpleMarginError("the intersection table must be square")
        for l in range(k):
            if self.table[l][l] != -1:
                raise AmpleMarginError(f"diagonal entry {l + 1} must be -1")
            for lp in range(l):
                if self.table[l][lp] != 0:
                    raise AmpleMarginError(
                        f"earlier exceptional divisor {lp + 1} must not meet fibers of "
                        f"blow-up {l + 1}"
                    )
            for lp in range(l + 1, k):
                if self.table[l][lp] < 0:
                    raise AmpleMarginError(
                        f"later exceptional divisor {lp + 1} has negative degree on "
                        f"fibers of blow-up {l + 1}"
                    )

    @property
    def k(self) -> int:
        return len(self.table)


@dataclass(frozen=True)
class AmpleMarginCertificate:
    beta: int
    m: int
    values: tuple[int, ...]

    def as_dict(self) -> dict[str, object]:
        return {"beta": self.beta, "m": self.m, "values": list(self.values)}


def ample_margin(problem: AmpleMarginProblem) -> AmpleMarginCertificate:
    """Margin certificate for the weighted exceptional combination.

    Let beta be the largest off-diagonal entry and m = beta + 2.  Then the
    divisor -E_k - m E_{k-1} - ... - m^{k-1} E_1 is positive against every
    fiber curve; the certificate lists the k pairing values, each verified
    positive.
    """
    k = problem.k
    beta = 0
    for l in range(k):
        for lp in range(l + 1, k):
            beta = max(beta, problem.table[l][lp])
    m = beta + 2
    values = []
    for l in range(k):
        value = -sum(m ** (k - 1 - lp) * problem.table[l][lp] for lp in range(k))
        values.append(value)
    cert = AmpleMarginCertificate(beta=beta, m=m, values=tuple(values))
    if any(v <= 0 for v in values):
        raise AmpleMarginError(
            f"margin certificate failed at m={m}: values {values}"
        )
    return cert
