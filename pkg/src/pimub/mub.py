"""Construction of the 2^n + 1 mutually unbiased bases from phase-space rays.

For each slope ``mu`` the monomials { Z_alpha X_(mu alpha) } commute pairwise,
so they share an eigenbasis; that eigenbasis is the slope-``mu`` measurement
basis, with vectors labeled |nu, mu> = X_nu |anchor(mu)>.  The slope mu = 0
gives the computational basis exactly, and one extra basis of infinite slope
(the Fourier image of the computational basis) completes the family.

The anchor of each slope basis is a joint eigenvector selected by a
deterministic gauge:

1. restrict to eigenvectors invariant under every qubit transposition that
   fixes the slope label (when any exist) -- this is what allows the
   label-level swap covariance to hold where it can hold at all;
2. among those, prefer eigenvalue +1 on the Hermitian monomials of the set;
3. break remaining ties by the first high-modulus component and then
   lexicographically, after fixing the overall phase.

The family is deterministic for a fixed n: identical labels, vectors and
exported bytes on every run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEigenspaceError, SchemaError
from .gf2n import Field, FieldElement
from .operators import fourier, permute_label

_PHASE_TOL = 1e-9
_EIG_GAP = 1e-7
_MAX_REWEIGHT = 8


# ----------------------------------------------------------------------
# Basis labels
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BasisLabel:
    """Either a slope basis (field element mu) or the vertical basis."""

    slope: FieldElement | None = None

    @property
    def is_vertical(self) -> bool:
        return self.slope is None

    def sort_key(self) -> tuple[int, int]:
        # Slopes by self-dual bits, vertical ordered last.
        if self.slope is None:
            return (1, 0)
        return (0, self.slope.bits)

    def __repr__(self) -> str:
        if self.slope is None:
            return "BasisLabel(vertical)"
        return f"BasisLabel(slope={self.slope.bits})"

    def to_json(self):
        return "vertical" if self.slope is None else {"slope": self.slope.bits}


def vertical_label() -> BasisLabel:
    return BasisLabel(None)


def slope_label(mu: FieldElement) -> BasisLabel:
    return BasisLabel(mu)


def family_labels(field: Field) -> list[BasisLabel]:
    """All 2^n + 1 labels: slopes ordered by bits, then the vertical basis."""
    return [BasisLabel(field.element(b)) for b in range(field.size)] + [BasisLabel(None)]


def label_from_json(field: Field, obj) -> BasisLabel:
    if obj == "vertical":
        return BasisLabel(None)
    if isinstance(obj, dict) and set(obj) == {"slope"}:
        return BasisLabel(field.element(int(obj["slope"])))
    raise SchemaError(f"malformed basis label: {obj!r}")


# ----------------------------------------------------------------------
# Cheap monomial action (signed index permutation)
# ----------------------------------------------------------------------

def _sign_vector(aidx: int, dim: int) -> np.ndarray:
    pop = np.array([(i & aidx).bit_count() for i in range(dim)])
    return np.where(pop % 2, -1.0, 1.0)


def _monomial_matrix(aidx: int, bidx: int, dim: int) -> np.ndarray:
    """Dense Z_alpha X_beta given computational indices of alpha and beta."""
    cols = np.arange(dim)
    rows = cols ^ bidx
    mat = np.zeros((dim, dim), dtype=complex)
    mat[rows, cols] = _sign_vector(aidx, dim)[rows]
    return mat


def slope_points(field: Field, mu: FieldElement) -> list[tuple[FieldElement, FieldElement]]:
    """The ray of slope mu: pairs (alpha, mu * alpha) over all alpha."""
    return [(a, mu * a) for a in field.elements()]


# ----------------------------------------------------------------------
# Slope basis construction
# ----------------------------------------------------------------------

def _joint_eigenbasis(field: Field, mu: FieldElement) -> np.ndarray:
    """Simultaneous eigenbasis of the slope monomials via a weighted resolvent.

    Any real combination of the Hermitian and anti-Hermitian parts of the
    commuting monomials commutes with all of them; for generic weights its
    spectrum is simple and eigh returns the joint eigenbasis directly.
    """
    dim = field.size
    for attempt in range(_MAX_REWEIGHT):
        rng = np.random.default_rng(0xC0FFEE + 1009 * mu.bits + attempt)
        ham = np.zeros((dim, dim), dtype=complex)
        for alpha in field.elements():
            if alpha.bits == 0:
                continue
            w = _monomial_matrix(alpha.index, (mu * alpha).index, dim)
            a, b = rng.uniform(0.5, 1.5, size=2)
            ham += a * (w + w.conj().T) + b * 1j * (w - w.conj().T)
        evals, evecs = np.linalg.eigh(ham)
        spread = max(evals[-1] - evals[0], 1.0)
        if np.diff(evals).min() > _EIG_GAP * spread:
            return evecs
    raise DegenerateEigenspaceError(
        f"could not resolve a simple joint spectrum for slope {mu.bits} "
        f"after {_MAX_REWEIGHT} reweightings"
    )


def _phase_fixed(vec: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(vec) > _PHASE_TOL))
    out = vec * (vec[k].conjugate() / abs(vec[k]))
    out[k] = abs(out[k])
    return out


def _stabilizer_swaps(mu: FieldElement) -> list[tuple[int, int]]:
    n = mu.field.n
    return [
        (p, q)
        for p in range(1, n + 1)
        for q in range(p + 1, n + 1)
        if permute_label(mu, p, q) == mu
    ]


def _swap_permutation(field: Field, p: int, q: int) -> np.ndarray:
    """Index array perm with (Pi v)[i] = v[perm[i]] for the (p, q) qubit swap."""
    n, dim = field.n, field.size
    bp, bq = n - p, n - q
    idx = np.arange(dim)
    a, b = idx >> bp & 1, idx >> bq & 1
    return idx & ~(1 << bp) & ~(1 << bq) | (b << bp) | (a << bq)


def _select_anchor(field: Field, mu: FieldElement, evecs: np.ndarray) -> np.ndarray:
    dim = field.size
    candidates = list(range(dim))

    # 1) keep eigenvectors fixed (up to phase) by every slope-stabilizing swap
    stab_perms = [_swap_permutation(field, p, q) for p, q in _stabilizer_swaps(mu)]
    if stab_perms:
        invariant = [
            c for c in candidates
            if all(abs(np.vdot(evecs[:, c], evecs[:, c][perm])) > 1 - 1e-9
                   for perm in stab_perms)
        ]
        if invariant:
            candidates = invariant

    # 2) prefer eigenvalue +1 on the Hermitian monomials of the slope set
    hermitian_alphas = [
        a for a in field.elements()
        if a.bits != 0 and (mu * a.square()).trace() == 0
    ]
    def plus_one_count(c: int) -> int:
        v = evecs[:, c]
        count = 0
        for a in hermitian_alphas:
            sign = _sign_vector(a.index, dim)
            wv = sign * v[np.arange(dim) ^ (mu * a).index]
            count += abs(np.vdot(v, wv) - 1.0) < 1e-8
        return count

    scores = {c: plus_one_count(c) for c in candidates}
    best = max(scores.values())
    candidates = [c for c in candidates if scores[c] == best]

    # 3) deterministic tie-break on the phase-fixed components
    def tie_key(c: int):
        v = _phase_fixed(evecs[:, c])
        k = int(np.argmax(np.abs(v) > _PHASE_TOL))
        comps = tuple(np.round(v.view(float), 10))
        return (k, -round(abs(v[k]), 10), comps)

    chosen = min(candidates, key=tie_key)
    return _phase_fixed(evecs[:, chosen])


def build_slope_basis(field: Field, mu: FieldElement) -> np.ndarray:
    """Orthonormal eigenbasis of { Z_alpha X_(mu alpha) }, columns ordered by nu.

    Column ``nu.index`` holds |nu, mu> = X_nu |anchor>, so the shift
    covariance X_beta |nu, mu> = |nu + beta, mu> is exact by construction.
    For mu = 0 this is exactly the computational basis.
    """
    dim = field.size
    if mu.bits == 0:
        basis = np.eye(dim, dtype=complex)
    else:
        anchor = _select_anchor(field, mu, _joint_eigenbasis(field, mu))
        basis = anchor[np.bitwise_xor.outer(np.arange(dim), np.arange(dim))]
    basis.flags.writeable = False
    return basis


def build_vertical(field: Field) -> np.ndarray:
    """The infinite-slope basis: columns are the Fourier images F |nu>."""
    basis = fourier(field)
    basis.flags.writeable = False
    return basis


@dataclass(frozen=True)
class MubFamily:
    """The full labeled family of 2^n + 1 bases (immutable once built)."""

    field: Field
    bases: dict  # BasisLabel -> (dim, dim) ndarray, columns ordered by nu.index

    def labels(self) -> list[BasisLabel]:
        return list(self.bases)

    def basis(self, label: BasisLabel) -> np.ndarray:
        return self.bases[label]

    def vector(self, label: BasisLabel, nu: FieldElement) -> np.ndarray:
        return self.bases[label][:, nu.index]

    def projector(self, label: BasisLabel, nu: FieldElement) -> np.ndarray:
        v = self.vector(label, nu)
        return np.outer(v, v.conj())


def build_family(field: Field) -> MubFamily:
    """All 2^n slope bases plus the vertical basis."""
    bases: dict[BasisLabel, np.ndarray] = {}
    for label in family_labels(field):
        if label.is_vertical:
            bases[label] = build_vertical(field)
        else:
            bases[label] = build_slope_basis(field, label.slope)
    return MubFamily(field=field, bases=bases)


# ----------------------------------------------------------------------
# Structural verification helpers
# ----------------------------------------------------------------------

def unbiasedness_deviation(family: MubFamily) -> dict:
    """Worst-case deviations from the two-point overlap law.

    Returns the largest |gram - identity| entry within bases and the largest
    | |overlap|^2 - 1/2^n | across distinct bases.
    """
    dim = family.field.size
    labels = family.labels()
    max_gram = 0.0
    max_cross = 0.0
    for i, la in enumerate(labels):
        va = family.basis(la)
        max_gram = max(max_gram, float(np.abs(va.conj().T @ va - np.eye(dim)).max()))
        for lb in labels[i + 1:]:
            ov2 = np.abs(va.conj().T @ family.basis(lb)) ** 2
            max_cross = max(max_cross, float(np.abs(ov2 - 1.0 / dim).max()))
    return {"max_gram_dev": max_gram, "max_cross_dev": max_cross}


def completeness_deviation(family: MubFamily) -> float:
    """Deviation of sum_k sum_nu P_(nu,k) from (2^n + 1) * identity."""
    dim = family.field.size
    total = np.zeros((dim, dim), dtype=complex)
    for label in family.labels():
        v = family.basis(label)
        total += v @ v.conj().T
    return float(np.abs(total - (len(family.labels())) * np.eye(dim)).max())


def reconstruct_identity_check(family: MubFamily, rho: np.ndarray) -> np.ndarray:
    """Evaluate sum_(k,nu) Tr(rho P_(nu,k)) P_(nu,k) - identity.

    For a valid family this reproduces rho exactly (up to roundoff) for any
    density matrix: the sum over each basis is a pinching, and the 2^n + 1
    pinchings of a mutually unbiased family tile the operator space.
    """
    dim = family.field.size
    out = np.zeros((dim, dim), dtype=complex)
    for label in family.labels():
        v = family.basis(label)
        probs = np.einsum("ij,jk,ki->i", v.conj().T, rho, v).real
        out += (v * probs) @ v.conj().T
    return out - np.eye(dim)


def swap_covariance_report(family: MubFamily) -> dict:
    """Conjugate every basis with every swap and match against the family.

    For each transposition (p, q) and each basis, the permuted basis either
    coincides with a family basis (up to per-vector phases) or escapes the
    family.  Where it coincides, the induced label map is compared against
    two candidate index rules:

    * ``both-swap``: nu' = nu + eps tr(nu eps), mu' = mu + eps tr(mu eps)
      (both labels transform through their own trace factor);
    * ``display``: the mu index shifted by eps tr(nu eps) instead, which
      would make the target basis depend on nu.

    Returns a dict with the closure flag, per-rule verdicts and failures.
    """
    field = family.field
    dim = field.size
    labels = family.labels()
    failures: list[tuple[int, int, str]] = []
    both_swap = True
    display = True
    checked = 0

    for p in range(1, field.n + 1):
        for q in range(p + 1, field.n + 1):
            perm = _swap_permutation(field, p, q)
            for label in labels:
                basis = family.basis(label)
                permuted = basis[perm, :]
                # locate the target basis via the permuted anchor column
                target = None
                for cand in labels:
                    ov = np.abs(family.basis(cand).conj().T @ permuted[:, 0])
                    if ov.max() > 1 - 1e-9:
                        target = cand
                        break
                if target is None:
                    failures.append((p, q, repr(label)))
                    continue
                ov = np.abs(family.basis(target).conj().T @ permuted)
                col_to_row = ov.argmax(axis=0)
                if not np.allclose(ov[col_to_row, np.arange(dim)], 1.0, atol=1e-9):
                    failures.append((p, q, repr(label)))
                    continue
                # verify index rules on every nu of this basis
                checked += 1
                for nu_idx in range(dim):
                    nu = field.from_index(nu_idx)
                    nu_moved = permute_label(nu, p, q)
                    actual_nu_idx = int(col_to_row[nu_idx])
                    if label.is_vertical:
                        expect_target = vertical_label()
                        expect_display = expect_target
                    else:
                        expect_target = BasisLabel(permute_label(label.slope, p, q))
                        eps = field.element((1 << (p - 1)) ^ (1 << (q - 1)))
                        shift = eps if (eps * nu).trace() else field.zero()
                        expect_display = BasisLabel(label.slope + shift)
                    if target != expect_target or actual_nu_idx != nu_moved.index:
                        both_swap = False
                    if target != expect_display or actual_nu_idx != nu_moved.index:
                        display = False

    return {
        "closed": not failures,
        "bases_checked": checked,
        "both_swap_rule_holds": both_swap,
        "display_rule_holds": display,
        "failures": failures,
    }


# ----------------------------------------------------------------------
# JSON interchange
# ----------------------------------------------------------------------

def basis_to_json(field: Field, label: BasisLabel, basis: np.ndarray) -> dict:
    vectors = [
        [[float(z.real), float(z.imag)] for z in basis[:, j]]
        for j in range(basis.shape[1])
    ]
    return {"n": field.n, "label": label.to_json(), "vectors": vectors}


def family_to_json(family: MubFamily) -> dict:
    return {
        "n": family.field.n,
        "bases": [
            basis_to_json(family.field, label, family.basis(label))
            for label in family.labels()
        ],
    }
