"""Finitely supported signed measures with zero total mass (contrasts).

A contrast is the index object of the intrinsic random fields handled by this
package: a finite collection of weighted atoms whose weights sum to zero.
Atoms either carry point support or unit-cell support (the axis-aligned unit
square centered at the atom's location).  Cell atoms and lattice-space atoms
must sit on integer coordinates.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import MixedSupportError, NonzeroMassError

ZERO_MASS_TOL = 1e-12
# weights below this magnitude after merging are treated as cancelled
_DROP_TOL = 1e-15

POINT = "point"
CELL = "cell"
CONTINUUM = "continuum"
LATTICE = "lattice"


@dataclass(frozen=True)
class Atom:
    """One weighted atom of a contrast.

    location : (x, y) coordinates; integers for lattice space and cell support
    support_kind : "point" or "cell"
    weight : finite nonzero real after canonicalization
    """

    location: tuple
    support_kind: str = POINT
    weight: float = 1.0


@dataclass(frozen=True)
class Contrast:
    """Canonical zero-mass signed measure with finite support.

    Instances are immutable; construct through :func:`make_contrast`, which
    merges coincident atoms, drops cancelled ones and enforces the zero total
    mass invariant.  An empty contrast (no atoms) is valid and represents the
    zero measure.
    """

    atoms: tuple
    space: str = CONTINUUM

    @property
    def support_kind(self):
        return self.atoms[0].support_kind if self.atoms else POINT

    @property
    def total_mass(self):
        return sum(a.weight for a in self.atoms)

    def locations(self):
        return [a.location for a in self.atoms]

    def weights(self):
        return [a.weight for a in self.atoms]

    def __len__(self):
        return len(self.atoms)


def _validate_location(loc, support_kind, space):
    if len(loc) != 2:
        raise ValueError(f"atom location must be a coordinate pair, got {loc!r}")
    x, y = float(loc[0]), float(loc[1])
    needs_integers = space == LATTICE or support_kind == CELL
    if needs_integers:
        if x != int(x) or y != int(y):
            raise ValueError(
                f"{support_kind} support in {space} space requires integer "
                f"coordinates, got {loc!r}"
            )
        return (int(x), int(y))
    return (x, y)


def _canonicalize(atoms, space):
    """Merge coincident atoms, drop cancelled ones, fix ordering."""
    if not atoms:
        return ()
    kinds = {a.support_kind for a in atoms}
    if len(kinds) > 1:
        raise MixedSupportError(f"atoms mix support kinds {sorted(kinds)}")
    kind = kinds.pop()
    if kind not in (POINT, CELL):
        raise ValueError(f"unknown support kind {kind!r}")
    merged = {}
    for a in atoms:
        loc = _validate_location(a.location, kind, space)
        if not (abs(a.weight) < float("inf")):
            raise ValueError(f"atom weight must be finite, got {a.weight!r}")
        merged[loc] = merged.get(loc, 0.0) + float(a.weight)
    kept = [
        Atom(loc, kind, w)
        for loc, w in sorted(merged.items())
        if abs(w) > _DROP_TOL
    ]
    return tuple(kept)


def make_contrast(atoms: Sequence[Atom], space: str = CONTINUUM) -> Contrast:
    """Build a canonical contrast from a nonempty list of atoms.

    Raises NonzeroMassError when |sum of weights| > 1e-12 and
    MixedSupportError when point and cell atoms are mixed.  Coincident atoms
    are merged by summing weights; fully cancelled contrasts come out empty.
    """
    if not atoms:
        raise ValueError("make_contrast requires at least one atom")
    if space not in (CONTINUUM, LATTICE):
        raise ValueError(f"unknown space {space!r}")
    total = sum(float(a.weight) for a in atoms)
    if abs(total) > ZERO_MASS_TOL:
        raise NonzeroMassError(
            f"total mass {total:.3e} exceeds tolerance {ZERO_MASS_TOL:g}"
        )
    return Contrast(_canonicalize(atoms, space), space)


def from_pairs(pairs: Iterable[tuple], space: str = CONTINUUM,
               support_kind: str = POINT) -> Contrast:
    """Shorthand: build a contrast from ((x, y), weight) pairs."""
    return make_contrast(
        [Atom(tuple(loc), support_kind, w) for loc, w in pairs], space
    )


def linear_combine(b: float, sigma: Contrast, d: float, nu: Contrast) -> Contrast:
    """Return the canonical contrast b*sigma + d*nu.

    Both inputs must share space and support kind (empty contrasts are
    compatible with anything).  Zero mass is preserved automatically.
    """
    if sigma.space != nu.space and len(sigma) and len(nu):
        raise MixedSupportError(
            f"cannot combine {sigma.space} and {nu.space} contrasts"
        )
    if len(sigma) and len(nu) and sigma.support_kind != nu.support_kind:
        raise MixedSupportError(
            f"cannot combine {sigma.support_kind} and {nu.support_kind} support"
        )
    space = sigma.space if len(sigma) else nu.space
    kind = sigma.support_kind if len(sigma) else nu.support_kind
    atoms = [Atom(a.location, kind, b * a.weight) for a in sigma.atoms]
    atoms += [Atom(a.location, kind, d * a.weight) for a in nu.atoms]
    return Contrast(_canonicalize(atoms, space), space)


class FinitenessResult:
    """Boolean-valued result of the log-moment finiteness check.

    ``point_support`` flags contrasts of distinct point masses: their de Wijs
    self-variance is infinite, and they are admissible only in operations that
    use cross-terms or the zero-at-zero convention for the log kernel.
    """

    def __init__(self, finite, point_support, note=""):
        self.finite = bool(finite)
        self.point_support = bool(point_support)
        self.note = note

    def __bool__(self):
        return self.finite

    def __repr__(self):
        return (f"FinitenessResult(finite={self.finite}, "
                f"point_support={self.point_support})")


def check_finiteness(sigma: Contrast) -> FinitenessResult:
    """Check the double log-moment condition for a canonical contrast.

    Cell-support contrasts always pass (cell averaging bounds the kernel).
    Point-support contrasts pass whenever all atoms are distinct, which
    canonicalization guarantees, but carry the point-support flag described
    on :class:`FinitenessResult`.
    """
    if sigma.support_kind == CELL or len(sigma) == 0:
        return FinitenessResult(True, False)
    return FinitenessResult(
        True, True,
        note=("point masses have infinite de Wijs self-variance; cross-term "
              "formulas and the zero-at-zero log convention remain valid"),
    )


# ---------------------------------------------------------------------------
# text format: one atom per line "x,y,weight" with a marker header
# ---------------------------------------------------------------------------

def write_contrast(contrast: Contrast, fh: TextIO) -> None:
    fh.write(f"# support={contrast.support_kind} space={contrast.space}\n")
    for a in contrast.atoms:
        fh.write(f"{a.location[0]:.12g},{a.location[1]:.12g},{a.weight:.12g}\n")


def read_contrast(fh: TextIO) -> Contrast:
    header = fh.readline().strip()
    if not header.startswith("#"):
        raise ValueError("contrast file must start with a '# support=... space=...' header")
    fields = dict(
        part.split("=", 1) for part in header.lstrip("#").split() if "=" in part
    )
    kind = fields.get("support", POINT)
    space = fields.get("space", CONTINUUM)
    atoms = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        x, y, w = (float(v) for v in line.split(","))
        atoms.append(Atom((x, y), kind, w))
    return make_contrast(atoms, space)
