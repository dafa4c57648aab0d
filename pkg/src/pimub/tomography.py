"""Permutationally invariant test states, measurement simulation, inversion.

A permutationally invariant (PI) n-qubit state decomposes over total-spin
sectors j = j_min .. n/2 as a direct sum of spin blocks rho_j tensored with
maximally mixed multiplicity factors; its free real parameter count is
sum_j (2j+1)^2 - 1.  This module generates such states (exact twirl, Dicke
mixtures, explicit spin blocks for n <= 3), simulates von Neumann
measurements in the MUB family exactly or with multinomial shot noise,
inverts measured probabilities back to a density matrix through the orbit
expansion, and projects noisy estimates to the physical PI set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    DimensionOverflowError,
    InvalidSpinError,
    MissingBasisError,
    SchemaError,
)
from .gf2n import Field
from .mub import BasisLabel, MubFamily, label_from_json
from .orbits import LabelPoint, OrbitTable, expand_probabilities, minimal_bases

_TWIRL_MAX_N = 8


# ----------------------------------------------------------------------
# Spin sector bookkeeping
# ----------------------------------------------------------------------

def spin_values(n: int) -> list[float]:
    """Total spins n/2, n/2 - 1, ..., down to 0 (n even) or 1/2 (n odd)."""
    return [two_j / 2.0 for two_j in range(n, -1, -2)][: n // 2 + 1]


def _two_j(n: int, j) -> int:
    two_j = int(round(2 * j))
    if abs(2 * j - two_j) > 1e-9 or two_j % 2 != n % 2 or not 0 <= two_j <= n:
        raise InvalidSpinError(f"j={j} is not a valid total spin for n={n}")
    return two_j


def multiplicity(n: int, j) -> int:
    """Number of spin-j copies: C(n, n/2 - j) - C(n, n/2 - j - 1)."""
    two_j = _two_j(n, j)
    k = (n - two_j) // 2
    return math.comb(n, k) - (math.comb(n, k - 1) if k >= 1 else 0)


def independent_parameter_count(n: int) -> int:
    """Free real parameters of a PI density matrix: sum_j (2j+1)^2 - 1."""
    return sum((int(2 * j) + 1) ** 2 for j in spin_values(n)) - 1


# ----------------------------------------------------------------------
# Permutation twirl
# ----------------------------------------------------------------------

def _qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise DimensionMismatchError(f"matrix dimension {dim} is not 2^n")
    return n


def _swap_index(n: int, p: int, q: int) -> np.ndarray:
    bp, bq = n - p, n - q
    idx = np.arange(1 << n)
    a, b = idx >> bp & 1, idx >> bq & 1
    return idx & ~(1 << bp) & ~(1 << bq) | (b << bp) | (a << bq)


def twirl(rho: np.ndarray) -> np.ndarray:
    """Exact average of U_pi rho U_pi^dag over the full symmetric group.

    Uses the coset recursion S_k = union_i (i k) S_(k-1): after the step at
    level k the matrix equals the exact S_k average, so n - 1 levels of at
    most n swaps replace the n! term sum.
    """
    n = _qubit_count(rho.shape[0])
    if n > _TWIRL_MAX_N:
        raise DimensionOverflowError(f"twirl supports n <= {_TWIRL_MAX_N}, got n={n}")
    out = np.array(rho, dtype=complex)
    for k in range(2, n + 1):
        acc = out.copy()
        for i in range(1, k):
            perm = _swap_index(n, i, k)
            acc += out[np.ix_(perm, perm)]
        out = acc / k
    return out


def is_permutation_invariant(rho: np.ndarray, tol: float = 1e-10) -> bool:
    n = _qubit_count(rho.shape[0])
    for p in range(1, n + 1):
        for q in range(p + 1, n + 1):
            perm = _swap_index(n, p, q)
            if np.abs(rho - rho[np.ix_(perm, perm)]).max() > tol:
                return False
    return True


# ----------------------------------------------------------------------
# PI state generation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PIStateSpec:
    """Recipe for a PI test state.

    method "twirl":  seeded random full-rank state averaged over S_n.
    method "dicke":  mixture of Dicke projectors with given weights
                     (one weight per excitation number 0..n).
    method "blocks": explicit spin-block densities rho_j with sector
                     probabilities p_j (hand-coded couplings, n <= 3).
    """

    n: int
    method: str
    seed: int | None = None
    weights: tuple | None = None
    block_probs: tuple | None = None
    blocks: tuple | None = None

    @classmethod
    def twirl(cls, n: int, seed: int) -> "PIStateSpec":
        return cls(n=n, method="twirl", seed=seed)

    @classmethod
    def dicke(cls, n: int, weights) -> "PIStateSpec":
        return cls(n=n, method="dicke", weights=tuple(float(w) for w in weights))

    @classmethod
    def spin_blocks(cls, n: int, probs, blocks) -> "PIStateSpec":
        return cls(
            n=n,
            method="blocks",
            block_probs=tuple(float(p) for p in probs),
            blocks=tuple(np.asarray(b, dtype=complex) for b in blocks),
        )


def random_density_matrix(dim: int, seed: int, rank: int | None = None) -> np.ndarray:
    """Seeded Ginibre density matrix (full rank unless ``rank`` given)."""
    rng = np.random.default_rng(seed)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(dim: int, seed: int) -> np.ndarray:
    """Seeded Haar-like random pure state density matrix."""
    return random_density_matrix(dim, seed, rank=1)


def dicke_state(n: int, excitations: int) -> np.ndarray:
    """Symmetric equal superposition of all strings with a fixed excitation count."""
    if not 0 <= excitations <= n:
        raise ValueError(f"excitation number must lie in 0..{n}")
    dim = 1 << n
    vec = np.zeros(dim, dtype=complex)
    hits = [i for i in range(dim) if i.bit_count() == excitations]
    vec[hits] = 1.0 / math.sqrt(len(hits))
    return vec


def _check_simplex(values, what: str) -> None:
    if any(v < -1e-12 for v in values) or abs(sum(values) - 1.0) > 1e-12:
        raise ValueError(f"{what} must be nonnegative and sum to 1, got {values}")


def _block_isometries(n: int) -> dict:
    """Isometries onto each spin-j copy, keyed by 2j (hand-coded, n <= 3).

    Column m of each isometry is |j, m> for m = j .. -j, with |0> as spin-up.
    Copies of the same j are orthonormal coupled bases, so mixing a block
    uniformly over its copies commutes with every qubit permutation.
    """
    s2, s3, s6, s23 = map(math.sqrt, (2.0, 3.0, 6.0, 2.0 / 3.0))
    if n == 1:
        return {1: [np.eye(2, dtype=complex)]}
    if n == 2:
        triplet = np.zeros((4, 3), dtype=complex)
        triplet[0b00, 0] = 1.0
        triplet[0b01, 1] = triplet[0b10, 1] = 1.0 / s2
        triplet[0b11, 2] = 1.0
        singlet = np.zeros((4, 1), dtype=complex)
        singlet[0b01, 0], singlet[0b10, 0] = 1.0 / s2, -1.0 / s2
        return {2: [triplet], 0: [singlet]}
    if n == 3:
        quartet = np.zeros((8, 4), dtype=complex)
        quartet[0b000, 0] = 1.0
        for i in (0b001, 0b010, 0b100):
            quartet[i, 1] = 1.0 / s3
        for i in (0b011, 0b101, 0b110):
            quartet[i, 2] = 1.0 / s3
        quartet[0b111, 3] = 1.0
        # copy A: qubits 1,2 coupled to a singlet
        copy_a = np.zeros((8, 2), dtype=complex)
        copy_a[0b010, 0], copy_a[0b100, 0] = 1.0 / s2, -1.0 / s2
        copy_a[0b011, 1], copy_a[0b101, 1] = 1.0 / s2, -1.0 / s2
        # copy B: qubits 1,2 coupled to a triplet, then down to j = 1/2
        copy_b = np.zeros((8, 2), dtype=complex)
        copy_b[0b001, 0] = s23
        copy_b[0b010, 0] = copy_b[0b100, 0] = -1.0 / s6
        copy_b[0b011, 1] = copy_b[0b101, 1] = 1.0 / s6
        copy_b[0b110, 1] = -s23
        return {3: [quartet], 1: [copy_a, copy_b]}
    raise DimensionOverflowError(f"explicit spin blocks are hand-coded for n <= 3, got n={n}")


def random_pi_state(spec: PIStateSpec) -> np.ndarray:
    """Build the PI density matrix described by ``spec``."""
    n, dim = spec.n, 1 << spec.n
    if spec.method == "twirl":
        if n > _TWIRL_MAX_N:
            raise DimensionOverflowError(f"twirl method requires n <= {_TWIRL_MAX_N}")
        if spec.seed is None:
            raise ValueError("twirl method requires a seed")
        return twirl(random_density_matrix(dim, spec.seed))
    if spec.method == "dicke":
        weights = spec.weights
        if weights is None or len(weights) != n + 1:
            raise ValueError(f"dicke method needs {n + 1} weights")
        _check_simplex(weights, "dicke weights")
        rho = np.zeros((dim, dim), dtype=complex)
        for k, w in enumerate(weights):
            if w:
                vec = dicke_state(n, k)
                rho += w * np.outer(vec, vec.conj())
        return rho
    if spec.method == "blocks":
        isometries = _block_isometries(n)
        two_js = sorted(isometries, reverse=True)
        probs, blocks = spec.block_probs, spec.blocks
        if probs is None or blocks is None or len(probs) != len(two_js) or len(blocks) != len(two_js):
            raise ValueError(
                f"blocks method needs {len(two_js)} sector probabilities and blocks "
                f"(sectors 2j = {two_js})"
            )
        _check_simplex(probs, "sector probabilities")
        rho = np.zeros((dim, dim), dtype=complex)
        for p_j, block, two_j in zip(probs, blocks, two_js):
            block = np.asarray(block, dtype=complex)
            if block.shape != (two_j + 1, two_j + 1):
                raise ValueError(f"sector 2j={two_j} block must be {two_j + 1}x{two_j + 1}")
            copies = isometries[two_j]
            for iso in copies:
                rho += (p_j / len(copies)) * (iso @ block @ iso.conj().T)
        return rho
    raise ValueError(f"unknown PI state method: {spec.method!r}")


# ----------------------------------------------------------------------
# Measurement simulation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome distribution of one von Neumann measurement basis.

    ``data`` maps the self-dual bitmask of nu to a probability (exact
    record) or to an integer count (sampled record with ``shots`` set).
    """

    n: int
    basis: BasisLabel
    data: dict
    shots: int | None = None

    @property
    def is_sampled(self) -> bool:
        return self.shots is not None

    def frequencies(self) -> dict:
        if self.shots is None:
            return dict(self.data)
        return {bits: count / self.shots for bits, count in self.data.items()}


def exact_probabilities(rho: np.ndarray, family: MubFamily, bases) -> list[MeasurementRecord]:
    """Born probabilities Tr(rho P_(nu,k)) for each requested basis."""
    field = family.field
    records = []
    for label in bases:
        v = family.basis(label)
        probs = np.einsum("ij,jk,ki->i", v.conj().T, rho, v).real
        data = {
            field.from_index(i).bits: float(probs[i])
            for i in range(field.size)
        }
        records.append(MeasurementRecord(n=field.n, basis=label, data=data))
    return records


def sample_counts(record: MeasurementRecord, shots: int, seed: int) -> MeasurementRecord:
    """Multinomial shot-noise simulation of an exact record (seeded)."""
    if record.is_sampled:
        raise ValueError("record already holds sampled counts")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    bits_order = sorted(record.data)
    pvals = np.array([max(record.data[b], 0.0) for b in bits_order])
    pvals /= pvals.sum()
    counts = np.random.default_rng(seed).multinomial(shots, pvals)
    return MeasurementRecord(
        n=record.n,
        basis=record.basis,
        data={b: int(c) for b, c in zip(bits_order, counts)},
        shots=shots,
    )


# ----------------------------------------------------------------------
# Reconstruction
# ----------------------------------------------------------------------

def reconstruct(
    records,
    table: OrbitTable,
    family: MubFamily,
    mode: str = "representative",
) -> np.ndarray:
    """Invert measured records into a density-matrix estimate.

    The records must cover the minimal bases; their distributions are
    propagated to the full family along label orbits and summed through
    rho = sum_(k,nu) p_(nu,k) P_(nu,k) - identity.  No physicality
    projection is applied here.
    """
    field = family.field
    provided = {record.basis for record in records}
    missing = [b for b in minimal_bases(field) if b not in provided]
    if missing:
        raise MissingBasisError(f"records missing required bases: {missing}")

    measured: dict[LabelPoint, float] = {}
    for record in records:
        for bits, p in record.frequencies().items():
            measured[LabelPoint(field.element(bits), record.basis)] = p

    expanded = expand_probabilities(measured, table, mode=mode)

    dim = field.size
    rho = np.zeros((dim, dim), dtype=complex)
    for label in family.labels():
        v = family.basis(label)
        probs = np.empty(dim)
        for bits in range(dim):
            nu = field.element(bits)
            probs[nu.index] = expanded[LabelPoint(nu, label)]
        rho += (v * probs) @ v.conj().T
    return rho - np.eye(dim)


def _project_to_simplex(values: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    desc = np.sort(values)[::-1]
    css = np.cumsum(desc)
    ks = np.arange(1, len(values) + 1)
    valid = desc - (css - 1.0) / ks > 0
    k = int(ks[valid][-1])
    theta = (css[k - 1] - 1.0) / k
    return np.maximum(values - theta, 0.0)


def project_physical(rho_hat: np.ndarray) -> np.ndarray:
    """Nearest physical PI state: eigenvalue simplex projection, then twirl.

    The twirl is a convex combination of unitary conjugations, so it cannot
    push the spectrum below zero; the second pass is a guard that documents
    that argument at runtime.
    """
    herm = (rho_hat + rho_hat.conj().T) / 2.0
    for _ in range(2):
        evals, evecs = np.linalg.eigh(herm)
        clipped = _project_to_simplex(evals)
        herm = twirl((evecs * clipped) @ evecs.conj().T)
        herm = (herm + herm.conj().T) / 2.0
        if np.linalg.eigvalsh(herm).min() >= -1e-12:
            return herm
    raise AssertionError("twirling re-introduced a negative eigenvalue")


# ----------------------------------------------------------------------
# Quality metrics
# ----------------------------------------------------------------------

def _check_same_dim(rho: np.ndarray, sigma: np.ndarray) -> None:
    if rho.shape != sigma.shape or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError(f"incompatible shapes {rho.shape} vs {sigma.shape}")


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1]."""
    _check_same_dim(rho, sigma)
    evals, evecs = np.linalg.eigh((rho + rho.conj().T) / 2.0)
    root = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    inner = np.linalg.eigvalsh(root @ sigma @ root)
    # roundoff leaves eigenvalues of order eps whose square roots would
    # pollute the sum at sqrt(eps); cut them relative to the largest one
    cut = inner.max() * rho.shape[0] * np.finfo(float).eps if inner.size else 0.0
    value = np.sqrt(np.clip(inner, 0.0, None) * (inner > cut)).sum()
    return float(min(max(value, 0.0), 1.0))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of rho - sigma, in [0, 1]."""
    _check_same_dim(rho, sigma)
    diff = rho - sigma
    diff = (diff + diff.conj().T) / 2.0
    value = 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum()
    return float(min(max(value, 0.0), 1.0))


# ----------------------------------------------------------------------
# JSON interchange for measurement records
# ----------------------------------------------------------------------

def record_to_json(record: MeasurementRecord) -> dict:
    key = "count" if record.is_sampled else "p"
    out = {
        "n": record.n,
        "basis": record.basis.to_json(),
        "data": [
            {"nu_bitmask": bits, key: record.data[bits]}
            for bits in sorted(record.data)
        ],
    }
    if record.shots is not None:
        out["shots"] = record.shots
    return out


def record_from_json(field: Field, obj: dict) -> MeasurementRecord:
    try:
        basis = label_from_json(field, obj["basis"])
        shots = obj.get("shots")
        data = {}
        for item in obj["data"]:
            bits = int(item["nu_bitmask"])
            data[bits] = int(item["count"]) if shots is not None else float(item["p"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed measurement record: {exc}") from exc
    return MeasurementRecord(n=field.n, basis=basis, data=data, shots=shots)
