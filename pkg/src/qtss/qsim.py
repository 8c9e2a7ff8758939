"""Exact sparse simulator for registers of q-dimensional qudits.

States are complex superpositions over computational-basis labels.  Every
evolution offered here permutes basis labels -- invertible affine maps on a
register subset, and additions into a target block controlled on disjoint
source registers -- so amplitudes are carried around unchanged and the only
floating-point effect is ordinary rounding in the amplitudes themselves.

Representation.  A state is a pair of parallel arrays: an ``(N, R)`` integer
matrix of basis labels (one row per branch, one column per register) and an
``(N,)`` complex vector of amplitudes.  This is a sparse map keyed by label
rows; labels are packed into base-q integers internally for sorting and
grouping.  Rows are always unique; they are kept lexicographically sorted
lazily, since the relabeling operations do not care about order.

Tolerances.  Normalization, Hermiticity and trace checks use ``NORM_TOL``
(1e-12); state/fidelity comparisons use ``MATCH_TOL`` (1e-10); amplitudes
below ``PRUNE_TOL`` (1e-14) are dropped.  Amplitudes in this problem domain
are of the form (small integer) / sqrt(branch count), so accumulated error
sits far below all three.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse

from .gf import FieldMatrix, FieldVector, PrimeField, SingularMatrixError

__all__ = [
    "EmptyStateError",
    "DimensionCapError",
    "SparseState",
    "DensityMatrix",
    "AffineMap",
    "superpose",
    "tensor",
    "fidelity",
    "trace_distance",
    "factor_check",
    "random_state",
    "PRUNE_TOL",
    "NORM_TOL",
    "MATCH_TOL",
    "DEFAULT_DIM_CAP",
]

PRUNE_TOL = 1e-14
NORM_TOL = 1e-12
MATCH_TOL = 1e-10

# Largest density matrix we will materialize (rows); 4096 x 4096 complex is
# ~268 MB and a few seconds of eigensolver time.
DEFAULT_DIM_CAP = 4096

# Full duplicate-label scan after a relabeling is O(N log N); above this
# branch count we rely on the proven bijectivity of the map instead (the
# linear part is checked invertible, and controlled additions are bijective
# for any coefficient matrix).
_UNIQUENESS_SCAN_LIMIT = 100_000

_LABEL_DTYPE = np.int16


class EmptyStateError(ValueError):
    """All amplitudes cancelled or no branches were supplied."""


class DimensionCapError(ValueError):
    """A dense object would exceed the configured dimension cap."""


def _pack(labels: np.ndarray, q: int) -> np.ndarray | None:
    """Base-q packing of label rows into int64 keys, or None on overflow.

    Accumulates column by column (key = (...(c0*q + c1)*q + c2)...), which
    streams the int16 label columns directly instead of materializing a
    wide int64/float64 copy of the whole array.
    """
    t = labels.shape[1]
    if t == 0:
        return np.zeros(len(labels), dtype=np.int64)
    if t * math.log2(q) >= 62:
        return None
    if t * math.log2(q) < 53:
        # float64 dot products are exact below 2**53 and go through BLAS,
        # much faster than both integer matmul and per-column accumulation.
        powers = q ** np.arange(t - 1, -1, -1, dtype=np.float64)
        return (labels.astype(np.float64) @ powers).astype(np.int64)
    keys = labels[:, 0].astype(np.int64)
    for col in range(1, t):
        keys *= q
        keys += labels[:, col]
    return keys


def _mod_matmul(rows: np.ndarray, coeff_t: np.ndarray, q: int) -> np.ndarray:
    """Exact ``(rows @ coeff_t) % q`` for small residues, via float BLAS.

    Both factors hold residues below q, so every dot product is at most
    ``t * (q-1)**2``; that always fits a float64 mantissa (q < 2**16,
    desk-scale register counts) and usually a float32 one, and float matmul
    goes through BLAS instead of numpy's slow integer fallback.
    """
    bound = rows.shape[1] * (q - 1) ** 2
    if bound < (1 << 24):
        prod = (rows.astype(np.float32) @ coeff_t.astype(np.float32)).astype(np.int32)
    else:
        prod = (rows.astype(np.float64) @ coeff_t.astype(np.float64)).astype(np.int64)
    return prod % q


def _lex_order(labels: np.ndarray) -> np.ndarray:
    # np.lexsort sorts by the last key first; feed columns right-to-left.
    return np.lexsort(labels.T[::-1]) if labels.shape[1] else np.arange(len(labels))


def _sort_order(labels: np.ndarray, q: int) -> np.ndarray:
    keys = _pack(labels, q)
    return np.argsort(keys) if keys is not None else _lex_order(labels)


def _rows_equal_next(labels: np.ndarray) -> np.ndarray:
    """Boolean mask: row i equals row i+1 (labels assumed sorted)."""
    if len(labels) < 2:
        return np.zeros(0, dtype=bool)
    return np.all(labels[1:] == labels[:-1], axis=1)


def _coerce_matrix(matrix, q: int) -> np.ndarray:
    if isinstance(matrix, FieldMatrix):
        if matrix.field.q != q:
            raise ValueError(f"matrix over F_{matrix.field.q}, state over F_{q}")
        return matrix.to_array()
    arr = np.asarray(matrix, dtype=np.int64) % q
    if arr.ndim != 2:
        raise ValueError("coefficient matrix must be two-dimensional")
    return arr


class SparseState:
    """A normalized pure state of ``num_registers`` qudits of dimension q.

    Construct via :meth:`basis`, :meth:`from_branches` or the array
    constructor (which always dedupes, prunes and normalizes).  Instances
    are immutable: arrays are write-protected and operations return new
    states.
    """

    __slots__ = ("q", "num_registers", "labels", "amps", "_is_sorted")

    def __init__(self, q: int, labels, amps) -> None:
        PrimeField(q)  # validates primality / size
        labels = np.array(labels, dtype=_LABEL_DTYPE, ndmin=2)
        amps = np.asarray(amps, dtype=np.complex128).ravel().copy()
        if labels.shape[0] != amps.shape[0]:
            raise ValueError("labels and amplitudes disagree on branch count")
        if labels.size and (labels.min() < 0 or labels.max() >= q):
            raise ValueError(f"label digits must lie in [0, {q})")
        labels, amps = _combine(labels, amps, q)
        labels, amps = _prune_normalize(labels, amps)
        self.q = q
        self.num_registers = labels.shape[1]
        self.labels = labels
        self.amps = amps
        self._is_sorted = True
        _freeze(self)

    # -- constructors ---------------------------------------------------

    @classmethod
    def _wrap(cls, q: int, labels: np.ndarray, amps: np.ndarray, is_sorted: bool) -> SparseState:
        """Internal: wrap arrays known to hold unique labels and unit norm."""
        self = object.__new__(cls)
        self.q = q
        self.num_registers = labels.shape[1]
        self.labels = labels
        self.amps = amps
        self._is_sorted = is_sorted
        _freeze(self)
        return self

    @classmethod
    def basis(cls, q: int, digits: Sequence[int]) -> SparseState:
        """The computational basis state with the given register digits."""
        return cls(q, [tuple(digits)], [1.0])

    @classmethod
    def from_branches(
        cls, q: int, branches: Iterable[tuple[Sequence[int], complex]]
    ) -> SparseState:
        """Build a state from ``(label, weight)`` pairs.

        Weights on duplicate labels are summed; the result is pruned and
        normalized.  Raises :class:`EmptyStateError` if nothing survives.
        """
        pairs = list(branches)
        if not pairs:
            raise EmptyStateError("no branches supplied")
        lengths = {len(lbl) for lbl, _ in pairs}
        if len(lengths) != 1:
            raise ValueError(f"branch labels have differing lengths: {sorted(lengths)}")
        labels = np.array([tuple(lbl) for lbl, _ in pairs], dtype=_LABEL_DTYPE)
        if labels.ndim == 1:  # zero-register labels
            labels = labels.reshape(len(pairs), 0)
        amps = np.array([w for _, w in pairs], dtype=np.complex128)
        return cls(q, labels, amps)

    # -- basic properties -----------------------------------------------

    @property
    def num_branches(self) -> int:
        return len(self.amps)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def canonical(self) -> SparseState:
        """The same state with branches sorted lexicographically by label."""
        if self._is_sorted:
            return self
        order = _sort_order(self.labels, self.q)
        return SparseState._wrap(self.q, self.labels[order], self.amps[order], True)

    def branch_dict(self) -> dict[tuple[int, ...], complex]:
        return {tuple(int(d) for d in row): complex(a) for row, a in zip(self.labels, self.amps)}

    def allclose(self, other: SparseState, tol: float = MATCH_TOL) -> bool:
        """Branch-by-branch amplitude comparison (no global-phase slack)."""
        if not isinstance(other, SparseState):
            raise TypeError(f"cannot compare SparseState with {type(other).__name__}")
        if self.q != other.q or self.num_registers != other.num_registers:
            return False
        mine, theirs = self.branch_dict(), other.branch_dict()
        for lbl in mine.keys() | theirs.keys():
            if abs(mine.get(lbl, 0.0) - theirs.get(lbl, 0.0)) > tol:
                return False
        return True

    def dump(self) -> str:
        """One line per branch: ``label-digits : re,im``, sorted by label.

        Digits are concatenated for q <= 10 and comma-separated otherwise.
        """
        state = self.canonical()
        sep = "" if self.q <= 10 else ","
        lines = []
        for row, amp in zip(state.labels, state.amps):
            digits = sep.join(str(int(d)) for d in row)
            lines.append(f"{digits} : {float(amp.real)!r},{float(amp.imag)!r}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return (
            f"SparseState(q={self.q}, registers={self.num_registers}, "
            f"branches={self.num_branches})"
        )

    # -- evolution --------------------------------------------------------

    def apply_affine(self, targets: Sequence[int], matrix, offset=None) -> SparseState:
        """Relabel the target registers by ``x -> A x + b (mod q)``.

        ``A`` must be invertible over F_q, which makes the relabeling a
        permutation of basis states (hence unitary); amplitudes are reused
        untouched, so the 2-norm is preserved exactly.
        """
        targets = self._check_registers(targets, "target")
        a = _coerce_matrix(matrix, self.q)
        t = len(targets)
        if a.shape != (t, t):
            raise ValueError(f"matrix shape {a.shape} does not match {t} target registers")
        _require_invertible(a, self.q)
        if offset is None:
            b = np.zeros(t, dtype=np.int64)
        else:
            b = np.asarray([int(x) for x in offset], dtype=np.int64) % self.q
            if b.shape != (t,):
                raise ValueError("offset length does not match target registers")
        new_labels = self.labels.copy()
        if t:
            block = _mod_matmul(self.labels[:, targets], a.T, self.q)
            if b.any():
                block = (block + b.astype(block.dtype)) % self.q
            new_labels[:, targets] = block.astype(_LABEL_DTYPE)
        return self._relabeled(new_labels)

    def apply_controlled_add(
        self, sources: Sequence[int], targets: Sequence[int], coeff
    ) -> SparseState:
        """Add ``coeff @ source-digits`` into the target digits (mod q).

        Sources and targets must be disjoint; the map is then a bijection on
        labels for any coefficient matrix, with inverse ``-coeff``.
        """
        sources = self._check_registers(sources, "source")
        targets = self._check_registers(targets, "target")
        if set(sources) & set(targets):
            raise ValueError("source and target registers overlap")
        c = _coerce_matrix(coeff, self.q)
        if c.shape != (len(targets), len(sources)):
            raise ValueError(
                f"coefficient shape {c.shape} does not map {len(sources)} sources "
                f"to {len(targets)} targets"
            )
        new_labels = self.labels.copy()
        if len(targets) and len(sources):
            shift = _mod_matmul(self.labels[:, sources], c.T, self.q)
            tgt = self.labels[:, targets].astype(shift.dtype)
            new_labels[:, targets] = ((tgt + shift) % self.q).astype(_LABEL_DTYPE)
        return self._relabeled(new_labels)

    def _relabeled(self, new_labels: np.ndarray) -> SparseState:
        # Norm preservation is structural (the relabeling is bijective); for
        # states small enough to scan we also verify no labels collided.
        if len(new_labels) <= _UNIQUENESS_SCAN_LIMIT:
            order = _sort_order(new_labels, self.q)
            if np.any(_rows_equal_next(new_labels[order])):
                raise AssertionError("relabeling collided branches; norm would not be preserved")
            return SparseState._wrap(self.q, new_labels[order], self.amps[order].copy(), True)
        return SparseState._wrap(self.q, new_labels, self.amps, False)

    def _check_registers(self, regs: Sequence[int], what: str) -> list[int]:
        regs = [int(r) for r in regs]
        for r in regs:
            if not 0 <= r < self.num_registers:
                raise IndexError(f"{what} register {r} out of range 0..{self.num_registers - 1}")
        if len(set(regs)) != len(regs):
            raise ValueError(f"duplicate {what} registers: {regs}")
        return regs

    # -- measurement-side quantities --------------------------------------

    def partial_trace(self, keep: Sequence[int], dim_cap: int = DEFAULT_DIM_CAP) -> DensityMatrix:
        """Reduced density matrix of the kept registers (in the given order).

        Groups branches by the digits of the discarded registers and
        accumulates one outer product per group; cost is one sort of the
        branch array plus a sparse matrix product.
        """
        keep = self._check_registers(keep, "kept")
        dim = self.q ** len(keep)
        if dim > dim_cap:
            raise DimensionCapError(
                f"reduced dimension {self.q}**{len(keep)} = {dim} exceeds the cap {dim_cap}"
            )
        kept_idx = _pack(self.labels[:, keep], self.q)
        assert kept_idx is not None  # dim <= cap guarantees packability
        rest = [r for r in range(self.num_registers) if r not in keep]
        rest_labels = self.labels[:, rest]
        rest_keys = _pack(rest_labels, self.q)
        if rest_keys is not None:
            order = np.argsort(rest_keys)
            new_group = np.ones(len(order), dtype=bool)
            sorted_keys = rest_keys[order]
            new_group[1:] = sorted_keys[1:] != sorted_keys[:-1]
        else:
            order = _lex_order(rest_labels)
            new_group = np.ones(len(order), dtype=bool)
            new_group[1:] = ~_rows_equal_next(rest_labels[order])
        # One row per group of branches sharing the discarded digits; the
        # reduced matrix is the sum of the rows' outer products.
        starts = np.flatnonzero(new_group)
        indptr = np.concatenate((starts, [len(order)]))
        spread = scipy.sparse.csr_matrix(
            (self.amps[order], kept_idx[order], indptr),
            shape=(len(starts), dim),
            dtype=np.complex128,
        )
        rho = (spread.T @ spread.conj()).toarray()
        rho = (rho + rho.conj().T) / 2.0
        return DensityMatrix(self.q, len(keep), rho)


def _freeze(state: SparseState) -> None:
    state.labels.setflags(write=False)
    state.amps.setflags(write=False)


def _combine(labels: np.ndarray, amps: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Sort rows and sum amplitudes of duplicate labels."""
    if len(labels) == 0:
        return labels, amps
    order = _sort_order(labels, q)
    labels, amps = labels[order], amps[order]
    dup = _rows_equal_next(labels)
    if not dup.any():
        return labels, amps
    starts = np.flatnonzero(np.concatenate(([True], ~dup)))
    summed = np.add.reduceat(amps, starts)
    return labels[starts], summed


def _prune_normalize(labels: np.ndarray, amps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop negligible branches and normalize."""
    keep = np.abs(amps) >= PRUNE_TOL
    if not keep.all():
        labels, amps = labels[keep], amps[keep]
    norm = math.sqrt(float(np.sum(np.abs(amps) ** 2)))
    if norm < PRUNE_TOL:
        raise EmptyStateError("state vanished: all amplitudes cancelled or were pruned")
    return labels, amps / norm


def superpose(parts: Sequence[tuple[SparseState, complex]]) -> SparseState:
    """Normalized linear combination of states on identical register sets."""
    parts = list(parts)
    if not parts:
        raise EmptyStateError("no states supplied")
    q = parts[0][0].q
    regs = parts[0][0].num_registers
    for st, _ in parts:
        if st.q != q:
            raise ValueError("states over different qudit dimensions")
        if st.num_registers != regs:
            raise ValueError("states have different register counts")
    labels = np.concatenate([st.labels for st, _ in parts], axis=0)
    amps = np.concatenate([st.amps * complex(c) for st, c in parts])
    return SparseState(q, labels, amps)


def tensor(a: SparseState, b: SparseState) -> SparseState:
    """Product state: a's registers first, then b's."""
    if a.q != b.q:
        raise ValueError("states over different qudit dimensions")
    na, nb = a.num_branches, b.num_branches
    left = np.repeat(a.labels, nb, axis=0)
    right = np.tile(b.labels, (na, 1))
    labels = np.concatenate([left, right], axis=1)
    amps = (a.amps[:, None] * b.amps[None, :]).ravel()
    return SparseState(a.q, labels, amps)


@dataclass(frozen=True)
class AffineMap:
    """An invertible affine relabeling of a register subset.

    The transcript-friendly form of a basis-permutation unitary: digits x of
    the target registers become ``A x + b`` over F_q.
    """

    targets: tuple[int, ...]
    matrix: FieldMatrix
    offset: tuple[int, ...]

    def __post_init__(self) -> None:
        t = len(self.targets)
        if self.matrix.rows != t or self.matrix.cols != t:
            raise ValueError("matrix shape does not match target count")
        if len(self.offset) != t:
            raise ValueError("offset length does not match target count")
        self.matrix.inverse()  # raises SingularMatrixError if not a bijection

    def apply(self, state: SparseState) -> SparseState:
        return state.apply_affine(self.targets, self.matrix, self.offset)

    def inverse(self) -> AffineMap:
        inv = self.matrix.inverse()
        f = self.matrix.field
        shifted = inv @ FieldVector(f, tuple(self.offset))
        return AffineMap(self.targets, inv, tuple((-x) % f.q for x in shifted))


def _require_invertible(a: np.ndarray, q: int) -> None:
    f = PrimeField(q)
    m = FieldMatrix(f, a.shape[0], a.shape[1], tuple(int(x) for x in a.ravel()))
    try:
        m.inverse()
    except SingularMatrixError:
        raise SingularMatrixError(
            f"affine map matrix is singular over F_{q}; not a basis permutation"
        ) from None


class DensityMatrix:
    """A reduced state on a register subset, as a dense Hermitian matrix.

    Hermiticity and unit trace are validated on construction (within
    ``NORM_TOL``); positive semidefiniteness is an invariant verified where
    eigenvalues are computed, to avoid an eigensolve per construction.
    """

    __slots__ = ("q", "num_registers", "matrix")

    def __init__(self, q: int, num_registers: int, matrix, *, validate: bool = True) -> None:
        matrix = np.asarray(matrix, dtype=np.complex128)
        dim = q**num_registers
        if matrix.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix for {num_registers} registers of dimension {q}")
        if validate:
            if not np.allclose(matrix, matrix.conj().T, atol=NORM_TOL, rtol=0.0):
                raise ValueError("density matrix is not Hermitian")
            tr = complex(np.trace(matrix))
            if abs(tr - 1.0) > NORM_TOL * dim:
                raise ValueError(f"density matrix trace {tr} is not 1")
        self.q = q
        self.num_registers = num_registers
        self.matrix = matrix
        self.matrix.setflags(write=False)

    @classmethod
    def maximally_mixed(cls, q: int, num_registers: int) -> DensityMatrix:
        dim = q**num_registers
        return cls(q, num_registers, np.eye(dim, dtype=np.complex128) / dim)

    @classmethod
    def from_pure(cls, state: SparseState, dim_cap: int = DEFAULT_DIM_CAP) -> DensityMatrix:
        return state.partial_trace(range(state.num_registers), dim_cap)

    @property
    def dim(self) -> int:
        return self.q**self.num_registers

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    def eigenvalues(self, psd_tol: float = MATCH_TOL) -> np.ndarray:
        """Ascending real spectrum; checks positivity within ``psd_tol``."""
        vals = np.linalg.eigvalsh(self.matrix)
        if vals.size and vals[0] < -psd_tol:
            raise ValueError(f"density matrix has negative eigenvalue {vals[0]}")
        return vals

    def partial_trace(self, keep: Sequence[int]) -> DensityMatrix:
        """Trace out all but the given positions (relative to this matrix)."""
        keep = [int(p) for p in keep]
        t = self.num_registers
        for p in keep:
            if not 0 <= p < t:
                raise IndexError(f"position {p} out of range")
        if len(set(keep)) != len(keep):
            raise ValueError("duplicate positions")
        tensor_form = self.matrix.reshape((self.q,) * (2 * t))
        drop = [p for p in range(t) if p not in keep]
        for offset, p in enumerate(sorted(drop)):
            axis = p - offset
            tensor_form = np.trace(tensor_form, axis1=axis, axis2=axis + tensor_form.ndim // 2)
        # Axes now follow the kept positions in ascending order; reorder.
        ascending = sorted(keep)
        perm = [ascending.index(p) for p in keep]
        kd = len(keep)
        tensor_form = tensor_form.transpose(tuple(perm) + tuple(kd + i for i in perm))
        dim = self.q**kd
        return DensityMatrix(self.q, kd, tensor_form.reshape(dim, dim))

    def allclose(self, other: DensityMatrix, tol: float = MATCH_TOL) -> bool:
        return (
            self.q == other.q
            and self.num_registers == other.num_registers
            and bool(np.allclose(self.matrix, other.matrix, atol=tol, rtol=0.0))
        )

    def __repr__(self) -> str:
        return f"DensityMatrix(q={self.q}, registers={self.num_registers}, dim={self.dim})"


def fidelity(rho: DensityMatrix, psi: SparseState) -> float:
    """``<psi| rho |psi>`` for a pure reference on the same registers."""
    if psi.q != rho.q or psi.num_registers != rho.num_registers:
        raise ValueError("state and density matrix live on different registers")
    vec = np.zeros(rho.dim, dtype=np.complex128)
    idx = _pack(psi.labels, psi.q)
    vec[idx] = psi.amps
    val = np.vdot(vec, rho.matrix @ vec)
    return float(val.real)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the sum of the absolute eigenvalues of ``rho - sigma``."""
    if rho.q != sigma.q or rho.num_registers != sigma.num_registers:
        raise ValueError("density matrices live on different registers")
    diff = rho.matrix - sigma.matrix
    vals = np.linalg.eigvalsh(diff)
    return float(0.5 * np.sum(np.abs(vals)))


def factor_check(
    state: SparseState,
    block: Sequence[int],
    reference: SparseState,
    tol: float = MATCH_TOL,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> bool:
    """True iff ``state`` factors as ``reference`` on ``block`` times the rest.

    Checks that the reduced state on the block has fidelity 1 with the
    reference and is pure.  For a pure global state the complement's reduced
    spectrum equals the block's, so a pure block reduction already certifies
    full disentanglement; as an extra cross-check of the tracing code itself,
    the complement's purity is also computed directly when its dimension is
    small enough to be cheap.
    """
    block = [int(b) for b in block]
    if reference.num_registers != len(block) or reference.q != state.q:
        raise ValueError("reference does not match the block")
    rho = state.partial_trace(block, dim_cap)
    if fidelity(rho, reference) < 1.0 - tol:
        return False
    if abs(rho.purity() - 1.0) > tol:
        return False
    rest = [r for r in range(state.num_registers) if r not in block]
    if state.q ** len(rest) <= min(dim_cap, 512):
        rho_rest = state.partial_trace(rest, dim_cap)
        if abs(rho_rest.purity() - 1.0) > tol:
            return False
    return True


def random_state(
    q: int,
    num_registers: int,
    rng: np.random.Generator,
    support: int | None = None,
) -> SparseState:
    """A random pure state, uniform on the unit sphere of its support.

    With ``support=None`` the state covers all ``q**num_registers`` basis
    labels; otherwise that many distinct labels are drawn at random.
    Complex-Gaussian amplitudes normalized to the sphere give the rotation-
    invariant distribution on the chosen support.
    """
    dim = q**num_registers
    if support is None or support >= dim:
        support = dim
    elif support < 1:
        raise ValueError("support must be at least 1")
    if support > 1_000_000:
        raise ValueError("refusing to draw a random state with more than 1e6 components")
    if support == dim:
        picks = np.arange(dim)
    else:
        picks = rng.choice(dim, size=support, replace=False)
    amps = rng.normal(size=support) + 1j * rng.normal(size=support)
    digits = np.zeros((support, num_registers), dtype=_LABEL_DTYPE)
    rem = picks.astype(np.int64)
    for pos in range(num_registers - 1, -1, -1):
        digits[:, pos] = rem % q
        rem //= q
    return SparseState(q, digits, amps)
