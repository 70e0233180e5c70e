"""Zig-zag presentations of perverse-sheaf data at isolated points.

A zig-zag is a six-tuple (L, A, B, alpha, beta, gamma): an opaque label L
for the open part, two point spaces A and B, and the three maps of the
four-term sequence

    E^- --alpha--> A --beta--> B --gamma--> E^0

through the boundary spaces E^- and E^0 of the open part.  Validity means
exactness at A and B; nothing is required at the endpoints (the minimal
extension object has A = B = 0 under a nonzero boundary).  Open labels
carry no internal semantics here: boundary dimensions are caller input.

Duality is the transpose-and-swap involution (L, B*, A*, gamma^T,
beta^T, alpha^T) with the boundary roles exchanged; it fixes all three
standard objects, which is the property that pins the convention down.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from . import intertwine
from .linalg import (
    QMatrix,
    ShapeMismatch,
    block_diag,
    hstack,
    image_basis,
    kernel_basis,
    rank,
    vstack,
)

ZERO_LABEL = "0"

#: Desk-scale bound on every space dimension in an isomorphism search.
ISO_DIM_BOUND = 6


class ZeroRank(ValueError):
    """A rank-one-or-more constructor was given rank zero."""


class SizeBound(ValueError):
    """A dimension exceeds the desk-scale bound for isomorphism search."""


@dataclass(frozen=True)
class ZigZag:
    open_label: str
    e_minus: int
    e_zero: int
    a_dim: int
    b_dim: int
    alpha: QMatrix  # E^- -> A
    beta: QMatrix   # A -> B
    gamma: QMatrix  # B -> E^0

    def __post_init__(self) -> None:
        if min(self.e_minus, self.e_zero, self.a_dim, self.b_dim) < 0:
            raise ShapeMismatch("negative dimension")
        if (self.alpha.rows, self.alpha.cols) != (self.a_dim, self.e_minus):
            raise ShapeMismatch(
                f"alpha must be {self.a_dim}x{self.e_minus}, "
                f"got {self.alpha.rows}x{self.alpha.cols}"
            )
        if (self.beta.rows, self.beta.cols) != (self.b_dim, self.a_dim):
            raise ShapeMismatch(
                f"beta must be {self.b_dim}x{self.a_dim}, "
                f"got {self.beta.rows}x{self.beta.cols}"
            )
        if (self.gamma.rows, self.gamma.cols) != (self.e_zero, self.b_dim):
            raise ShapeMismatch(
                f"gamma must be {self.e_zero}x{self.b_dim}, "
                f"got {self.gamma.rows}x{self.gamma.cols}"
            )
        if self.open_label == ZERO_LABEL and (self.e_minus or self.e_zero):
            raise ShapeMismatch("zero open part forces zero boundary dimensions")

    def dims(self) -> tuple[int, int, int, int]:
        return (self.e_minus, self.a_dim, self.b_dim, self.e_zero)


class ExactnessIssue(NamedTuple):
    position: str  # "A" or "B"
    image_dim: int
    kernel_dim: int
    message: str


def validate(z: ZigZag) -> list[ExactnessIssue]:
    """Check exactness at A and B; an empty report means the zig-zag is valid."""
    issues = []
    im_a = image_basis(z.alpha)
    ker_b = kernel_basis(z.beta)
    if im_a.dim != ker_b.dim or not im_a.contains_subspace(ker_b):
        issues.append(
            ExactnessIssue(
                "A", im_a.dim, ker_b.dim,
                f"at A: im(alpha) has dim {im_a.dim}, ker(beta) has dim {ker_b.dim}",
            )
        )
    im_b = image_basis(z.beta)
    ker_g = kernel_basis(z.gamma)
    if im_b.dim != ker_g.dim or not im_b.contains_subspace(ker_g):
        issues.append(
            ExactnessIssue(
                "B", im_b.dim, ker_g.dim,
                f"at B: im(beta) has dim {im_b.dim}, ker(gamma) has dim {ker_g.dim}",
            )
        )
    return issues


def is_valid(z: ZigZag) -> bool:
    return not validate(z)


# -- standard objects ------------------------------------------------


def std_ic(open_label: str, e_minus: int, e_zero: int) -> ZigZag:
    """Minimal-extension zig-zag: zero point terms under the given boundary."""
    return ZigZag(
        open_label, e_minus, e_zero, 0, 0,
        QMatrix.zero(0, e_minus), QMatrix.zero(0, 0), QMatrix.zero(e_zero, 0),
    )


def std_skyscraper(r: int) -> ZigZag:
    """Point-supported object of rank r: (0, Q^r, Q^r, 0, id, 0)."""
    if r < 1:
        raise ZeroRank("skyscraper rank must be at least 1")
    return ZigZag(
        ZERO_LABEL, 0, 0, r, r,
        QMatrix.zero(r, 0), QMatrix.identity(r), QMatrix.zero(0, r),
    )


def std_corrected(open_label: str, e_minus: int, e_zero: int) -> ZigZag:
    """The distinguished corrected object in compressed form: (L, Q, Q, 0, id, 0)."""
    return ZigZag(
        open_label, e_minus, e_zero, 1, 1,
        QMatrix.zero(1, e_minus), QMatrix.identity(1), QMatrix.zero(e_zero, 1),
    )


# -- structure maps --------------------------------------------------


def combine_labels(l1: str, l2: str) -> str:
    if l1 == ZERO_LABEL:
        return l2
    if l2 == ZERO_LABEL:
        return l1
    return f"{l1}+{l2}"


def direct_sum(z1: ZigZag, z2: ZigZag) -> ZigZag:
    """Block-diagonal sum; boundary dims add, a zero open part contributes none."""
    return ZigZag(
        combine_labels(z1.open_label, z2.open_label),
        z1.e_minus + z2.e_minus,
        z1.e_zero + z2.e_zero,
        z1.a_dim + z2.a_dim,
        z1.b_dim + z2.b_dim,
        block_diag(z1.alpha, z2.alpha),
        block_diag(z1.beta, z2.beta),
        block_diag(z1.gamma, z2.gamma),
    )


def dualize(z: ZigZag) -> ZigZag:
    """Transpose-and-swap duality; an involution on the nose."""
    return ZigZag(
        z.open_label,
        z.e_zero,
        z.e_minus,
        z.b_dim,
        z.a_dim,
        z.gamma.transpose(),
        z.beta.transpose(),
        z.alpha.transpose(),
    )


@dataclass(frozen=True)
class CompressedShape:
    """Labels, dimensions, and ranks only: a lossy invariant of a zig-zag."""

    open_label: str
    e_minus: int
    e_zero: int
    a_dim: int
    b_dim: int
    rank_alpha: int
    rank_beta: int
    rank_gamma: int

    def __add__(self, other: CompressedShape) -> CompressedShape:
        return CompressedShape(
            combine_labels(self.open_label, other.open_label),
            self.e_minus + other.e_minus,
            self.e_zero + other.e_zero,
            self.a_dim + other.a_dim,
            self.b_dim + other.b_dim,
            self.rank_alpha + other.rank_alpha,
            self.rank_beta + other.rank_beta,
            self.rank_gamma + other.rank_gamma,
        )


def compressed_shape(z: ZigZag) -> CompressedShape:
    return CompressedShape(
        z.open_label, z.e_minus, z.e_zero, z.a_dim, z.b_dim,
        rank(z.alpha), rank(z.beta), rank(z.gamma),
    )


# -- isomorphism -----------------------------------------------------


class IsoWitness(NamedTuple):
    """Invertible maps (z1 -> z2) on E^-, A, B, E^0 intertwining the zig-zags."""

    p: QMatrix
    a: QMatrix
    b: QMatrix
    q: QMatrix


def verify_witness(z1: ZigZag, z2: ZigZag, w: IsoWitness) -> bool:
    """Exact check that w intertwines z1 with z2 and every block is invertible."""
    for blk, size_1, size_2 in (
        (w.p, z1.e_minus, z2.e_minus),
        (w.a, z1.a_dim, z2.a_dim),
        (w.b, z1.b_dim, z2.b_dim),
        (w.q, z1.e_zero, z2.e_zero),
    ):
        if (blk.rows, blk.cols) != (size_2, size_1):
            return False
        if blk.rows != blk.cols or rank(blk) != blk.rows:
            return False
    return (
        w.a * z1.alpha == z2.alpha * w.p
        and w.b * z1.beta == z2.beta * w.a
        and w.q * z1.gamma == z2.gamma * w.b
    )


def _rank_profile(z: ZigZag) -> tuple[int, ...]:
    # dims plus ranks of all forward composites: a complete invariant for
    # four-term chains of linear maps, by interval decomposition.
    return (
        z.e_minus, z.a_dim, z.b_dim, z.e_zero,
        rank(z.alpha), rank(z.beta), rank(z.gamma),
        rank(z.beta * z.alpha), rank(z.gamma * z.beta),
        rank(z.gamma * z.beta * z.alpha),
    )


def _check_size(z: ZigZag) -> None:
    if max(z.dims()) > ISO_DIM_BOUND:
        raise SizeBound(
            f"isomorphism search supports dims <= {ISO_DIM_BOUND}, got {z.dims()}"
        )


def iso_witness(z1: ZigZag, z2: ZigZag, strict: bool = False) -> IsoWitness | None:
    """A verified isomorphism witness, or None when none exists.

    Default mode lets the boundary spaces move by arbitrary invertible
    maps; strict mode pins them pointwise.  In the default mode the
    decision is made by the rank profile of forward composites (complete
    for chains of this length), and the search then only has to produce
    a witness that is known to exist.
    """
    _check_size(z1)
    _check_size(z2)
    if z1.open_label != z2.open_label:
        return None
    if not strict:
        if _rank_profile(z1) != _rank_profile(z2):
            return None
        if z1 == z2:
            return IsoWitness(
                QMatrix.identity(z1.e_minus), QMatrix.identity(z1.a_dim),
                QMatrix.identity(z1.b_dim), QMatrix.identity(z1.e_zero),
            )
        system = intertwine.BlockSystem(
            {
                "p": (z2.e_minus, z1.e_minus),
                "a": (z2.a_dim, z1.a_dim),
                "b": (z2.b_dim, z1.b_dim),
                "q": (z2.e_zero, z1.e_zero),
            }
        )
    else:
        if z1.dims() != z2.dims():
            return None
        system = intertwine.BlockSystem(
            {"a": (z2.a_dim, z1.a_dim), "b": (z2.b_dim, z1.b_dim)}
        )
    ida = QMatrix.identity
    # a*alpha1 - alpha2*p = 0, b*beta1 - beta2*a = 0, q*gamma1 - gamma2*b = 0
    if not strict:
        system.add_equation(
            [(ida(z2.a_dim), "a", z1.alpha), (-1 * z2.alpha, "p", ida(z1.e_minus))],
            shape=(z2.a_dim, z1.e_minus),
        )
        system.add_equation(
            [(ida(z2.b_dim), "b", z1.beta), (-1 * z2.beta, "a", ida(z1.a_dim))],
            shape=(z2.b_dim, z1.a_dim),
        )
        system.add_equation(
            [(ida(z2.e_zero), "q", z1.gamma), (-1 * z2.gamma, "b", ida(z1.b_dim))],
            shape=(z2.e_zero, z1.b_dim),
        )
    else:
        system.add_equation(
            [(ida(z2.a_dim), "a", z1.alpha)],
            constant=-1 * z2.alpha,
        )
        system.add_equation(
            [(ida(z2.b_dim), "b", z1.beta), (-1 * z2.beta, "a", ida(z1.a_dim))],
            shape=(z2.b_dim, z1.a_dim),
        )
        system.add_equation(
            [(-1 * z2.gamma, "b", ida(z1.b_dim))],
            constant=z1.gamma,
        )
    particular, basis = system.solve_affine()
    try:
        found = intertwine.find_invertible(
            particular,
            basis,
            list(system.variables.keys()),
            must_exist=not strict,
        )
    except ValueError as exc:
        raise SizeBound(str(exc)) from exc
    if found is None:
        return None
    if strict:
        witness = IsoWitness(
            QMatrix.identity(z1.e_minus), found["a"], found["b"],
            QMatrix.identity(z1.e_zero),
        )
    else:
        witness = IsoWitness(found["p"], found["a"], found["b"], found["q"])
    assert verify_witness(z1, z2, witness)
    return witness


def is_isomorphic(z1: ZigZag, z2: ZigZag, strict: bool = False) -> bool:
    return iso_witness(z1, z2, strict=strict) is not None


# -- multi-node zig-zags ----------------------------------------------


@dataclass(frozen=True)
class NodePart:
    """One node's contribution: point terms and maps against the shared boundary."""

    label: str
    a_dim: int
    b_dim: int
    alpha: QMatrix  # shared E^- -> A_k
    beta: QMatrix   # A_k -> B_k
    gamma: QMatrix  # B_k -> shared E^0


@dataclass(frozen=True)
class MultiZigZag:
    """Node-indexed direct sum of point contributions over one open part."""

    open_label: str
    e_minus: int
    e_zero: int
    nodes: tuple[NodePart, ...]

    def __post_init__(self) -> None:
        labels = [n.label for n in self.nodes]
        if len(set(labels)) != len(labels):
            raise ShapeMismatch(f"node labels must be distinct, got {labels}")
        for n in self.nodes:
            if (n.alpha.rows, n.alpha.cols) != (n.a_dim, self.e_minus):
                raise ShapeMismatch(f"node {n.label}: alpha of wrong shape")
            if (n.beta.rows, n.beta.cols) != (n.b_dim, n.a_dim):
                raise ShapeMismatch(f"node {n.label}: beta of wrong shape")
            if (n.gamma.rows, n.gamma.cols) != (self.e_zero, n.b_dim):
                raise ShapeMismatch(f"node {n.label}: gamma of wrong shape")
        if self.open_label == ZERO_LABEL and (self.e_minus or self.e_zero):
            raise ShapeMismatch("zero open part forces zero boundary dimensions")

    @staticmethod
    def skyscrapers(labels: Sequence[str]) -> MultiZigZag:
        """One rank-one point term per label; the multi-node local shadow."""
        parts = tuple(
            NodePart(
                label, 1, 1,
                QMatrix.zero(1, 0), QMatrix.identity(1), QMatrix.zero(0, 1),
            )
            for label in labels
        )
        return MultiZigZag(ZERO_LABEL, 0, 0, parts)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.nodes)

    def total(self) -> ZigZag:
        """Collapse the node indexing to a single zig-zag."""
        if not self.nodes:
            return std_ic(self.open_label, self.e_minus, self.e_zero)
        return ZigZag(
            self.open_label,
            self.e_minus,
            self.e_zero,
            sum(n.a_dim for n in self.nodes),
            sum(n.b_dim for n in self.nodes),
            vstack(*(n.alpha for n in self.nodes)),
            block_diag(*(n.beta for n in self.nodes)),
            hstack(*(n.gamma for n in self.nodes)),
        )

    def __iter__(self) -> Iterator[NodePart]:
        return iter(self.nodes)


def validate_multi(mz: MultiZigZag) -> list[ExactnessIssue]:
    return validate(mz.total())
