"""Dealer, combiners, secrecy verifier and communication-cost accounting.

The dealer turns an ``m``-qudit secret into the global shared state: each
basis component of the secret maps to the uniform superposition, over all
randomness assignments, of the product of share digit labels.  Two combiner
procedures undo the encoding:

* :func:`recover_from_d` contacts ``d`` participants and receives one qudit
  each (the first register of every contacted share).  It inverts the
  d-row Vandermonde block in place, then folds the recovered digits into the
  randomness-head block so that block mirrors the first qudits of the
  uncontacted shares, which disentangles the secret.

* :func:`recover_from_k` contacts ``k`` participants and receives all their
  ``m*k`` qudits.  Column by column it strips the Vandermonde mixing, peels
  the tail digits off the first column, extracts the secret, and finally
  re-randomizes the leftover registers so each mirrors the corresponding
  registers of the uncontacted shares.

Every combiner operation is recorded in a transcript and is mechanically
confined to the registers the combiner actually received; an operation
touching anything else raises :class:`CombinerLocalityError`.  Secrecy of
small participant subsets is checked operationally: reduced density
matrices of a subset must be identical (zero trace distance) across
secrets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gf import FieldMatrix, FieldVector
from .qsim import (
    DEFAULT_DIM_CAP,
    MATCH_TOL,
    DimensionCapError,
    SparseState,
    _mod_matmul,
    trace_distance,
)
from .staircase import (
    DEFAULT_BRANCH_CAP,
    EnumerationCapError,
    RandomnessSplit,
    SchemeParams,
    ShareLayout,
    encode_classical,
    scheme_vandermonde,
)

__all__ = [
    "CombinerLocalityError",
    "DealtState",
    "OpRecord",
    "RecoveryTranscript",
    "RecoveryResult",
    "SecrecyReport",
    "CostRow",
    "SECRECY_TOL",
    "basis_secret",
    "deal",
    "recover_from_d",
    "recover_from_k",
    "secrecy_check",
    "verify_complement_rule",
    "convert_to_mixed",
    "lower_bound",
    "cost_table",
    "encode_reference_cleve23",
    "default_secret_pairs",
]

SECRECY_TOL = MATCH_TOL


class CombinerLocalityError(RuntimeError):
    """A combiner operation tried to touch a register it never received."""


# ---------------------------------------------------------------------------
# Dealing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DealtState:
    """The global shared state plus the bookkeeping needed to act on it.

    ``active`` lists the participants still holding their shares; a mixed
    scheme (see :func:`convert_to_mixed`) simply shrinks this set while the
    discarded registers stay in the state as environment.
    """

    params: SchemeParams
    state: SparseState
    layout: ShareLayout
    active: frozenset[int]

    def require_active(self, participants: Iterable[int]) -> None:
        missing = sorted(set(participants) - self.active)
        if missing:
            raise ValueError(f"participants {missing} are not part of this scheme view")


def basis_secret(p: SchemeParams, digits: Sequence[int]) -> SparseState:
    """Convenience: the basis secret |digits> over the scheme's field."""
    if len(digits) != p.m:
        raise ValueError(f"secret must have {p.m} digits")
    return SparseState.basis(p.q, digits)


def _encoding_matrix(p: SchemeParams) -> np.ndarray:
    """Coefficient matrix taking (secret digits, randomness digits) to the
    flattened codeword table, share-major.

    Built column by column from :func:`encode_classical` on unit vectors, so
    the vectorized dealer is by construction the linear extension of the
    scalar encoder.
    """
    f = p.field
    n_in = p.m + p.randomness_len
    cols = []
    for z in range(n_in):
        s = FieldVector(f, tuple(1 if i == z else 0 for i in range(p.m)))
        r = tuple(1 if (i + p.m) == z else 0 for i in range(p.randomness_len))
        c = encode_classical(s, RandomnessSplit.from_flat(p, r), p)
        cols.append(np.array(c.entries, dtype=np.int64))
    return np.stack(cols, axis=1)  # (n*m, n_in)


def _all_randomness(p: SchemeParams) -> np.ndarray:
    """All q**(m*(k-1)) randomness rows, last digit fastest."""
    count = p.branch_count
    rows = np.zeros((count, p.randomness_len), dtype=np.int64)
    rem = np.arange(count, dtype=np.int64)
    for pos in range(p.randomness_len - 1, -1, -1):
        rows[:, pos] = rem % p.q
        rem //= p.q
    return rows


@lru_cache(maxsize=2)
def _deal_tables(p: SchemeParams) -> tuple[np.ndarray, np.ndarray]:
    """Secret-independent dealer tables: the secret-column coefficients and
    the randomness contribution to every codeword label."""
    coeff = _encoding_matrix(p)
    coeff_s = coeff[:, : p.m]
    rand_part = _mod_matmul(_all_randomness(p), coeff[:, p.m :].T, p.q)
    coeff_s.setflags(write=False)
    rand_part.setflags(write=False)
    return coeff_s, rand_part


def deal(
    secret: SparseState, p: SchemeParams, cap_branches: int = DEFAULT_BRANCH_CAP
) -> DealtState:
    """Encode an m-qudit secret into the n*m-register shared state.

    Each basis component |s> of the secret becomes the uniform superposition
    of its q**(m*(k-1)) codeword labels; the extension to superpositions is
    linear, and distinct (secret, randomness) pairs yield distinct labels, so
    the total branch count is (secret support) * q**(m*(k-1)).
    """
    if secret.q != p.q:
        raise ValueError(f"secret is over F_{secret.q}, scheme over F_{p.q}")
    if secret.num_registers != p.m:
        raise ValueError(f"secret must occupy {p.m} registers, has {secret.num_registers}")
    per_basis = p.branch_count
    total = secret.num_branches * per_basis
    if per_basis > cap_branches or total > cap_branches:
        raise EnumerationCapError(
            f"dealing would create {total} branches, above the cap of {cap_branches}"
        )
    coeff_s, rand_part = _deal_tables(p)
    sec = secret.canonical()
    label_blocks = []
    amp_blocks = []
    weight = 1.0 / np.sqrt(per_basis)
    for digits, amp in zip(sec.labels, sec.amps):
        base = (coeff_s @ digits.astype(np.int64)) % p.q
        label_blocks.append(((rand_part + base.astype(rand_part.dtype)) % p.q).astype(np.int16))
        amp_blocks.append(np.full(per_basis, amp * weight, dtype=np.complex128))
    labels = np.concatenate(label_blocks, axis=0)
    amps = np.concatenate(amp_blocks)
    if total <= 100_000:
        state = SparseState(p.q, labels, amps)
        if state.num_branches != total:
            raise AssertionError("encoding produced colliding codeword labels")
    else:
        state = SparseState._wrap(p.q, labels, amps, is_sorted=False)
    return DealtState(p, state, p.layout(), frozenset(range(1, p.n + 1)))


# ---------------------------------------------------------------------------
# Combiner sessions and transcripts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpRecord:
    """One combiner operation: what it did and which registers it touched."""

    kind: str  # "affine" | "controlled-add"
    targets: tuple[int, ...]
    sources: tuple[int, ...]
    note: str


@dataclass(frozen=True)
class RecoveryTranscript:
    """Accounting for one recovery session.

    ``qudit_cost`` counts the registers communicated to the combiner and
    ``channel_dim`` is the total Hilbert-space dimension q**cost that had to
    cross the channel.
    """

    accessed: Mapping[int, tuple[int, ...]]
    operations: tuple[OpRecord, ...]
    qudit_cost: int
    channel_dim: int
    output_registers: tuple[int, ...]


@dataclass(frozen=True)
class RecoveryResult:
    state: SparseState
    secret_registers: tuple[int, ...]
    transcript: RecoveryTranscript


class _CombinerSession:
    """Applies operations to the shared state, refusing non-local ones."""

    def __init__(self, dealt: DealtState, accessed: dict[int, tuple[int, ...]]):
        self.accessed = accessed
        self.allowed = frozenset(r for regs in accessed.values() for r in regs)
        self.state = dealt.state
        self.ops: list[OpRecord] = []

    def _guard(self, registers: Sequence[int]) -> None:
        outside = sorted(set(registers) - self.allowed)
        if outside:
            raise CombinerLocalityError(
                f"operation touches registers {outside} the combiner never received"
            )

    def affine(self, targets: Sequence[int], matrix: FieldMatrix, note: str) -> None:
        self._guard(targets)
        self.state = self.state.apply_affine(targets, matrix)
        self.ops.append(OpRecord("affine", tuple(targets), (), note))

    def controlled_add(
        self, sources: Sequence[int], targets: Sequence[int], coeff: FieldMatrix, note: str
    ) -> None:
        self._guard(list(sources) + list(targets))
        self.state = self.state.apply_controlled_add(sources, targets, coeff)
        self.ops.append(OpRecord("controlled-add", tuple(targets), tuple(sources), note))

    def finish(self, output_registers: Sequence[int]) -> RecoveryResult:
        cost = len(self.allowed)
        transcript = RecoveryTranscript(
            accessed=dict(self.accessed),
            operations=tuple(self.ops),
            qudit_cost=cost,
            channel_dim=self.state.q**cost,
            output_registers=tuple(output_registers),
        )
        return RecoveryResult(self.state, tuple(output_registers), transcript)


def recover_from_d(dealt: DealtState, participants: Iterable[int]) -> RecoveryResult:
    """Recover the secret from d participants, one qudit per share.

    Steps, confined to the d received registers (the first qudit of every
    contacted share):

    1. Invert the d-row Vandermonde block.  The received registers then hold
       the m secret digits followed by the k-1 digits of the first
       randomness block (head then tail).
    2. Remix the head block: scale it by the head-column block of the
       uncontacted rows' Vandermonde matrix, then add the matching
       combination of the secret and tail digits.  The head registers now
       carry exactly the digit values sitting in the uncontacted shares'
       first qudits, so summing over the head randomness yields a perfectly
       correlated pair, independent of the secret.

    The secret ends in the first m received registers, disentangled from
    everything else; cost is exactly d qudits.
    """
    p = dealt.params
    chosen = sorted(set(participants))
    if len(chosen) != p.d:
        raise ValueError(f"need exactly d={p.d} distinct participants, got {len(chosen)}")
    dealt.require_active(chosen)
    layout = dealt.layout
    regs = [layout.first_register_of(i) for i in chosen]
    session = _CombinerSession(dealt, {i: (layout.first_register_of(i),) for i in chosen})

    vand = scheme_vandermonde(p)
    block_d = vand.submatrix([i - 1 for i in chosen], None)
    session.affine(
        regs,
        block_d.inverse(),
        "invert the d-row Vandermonde block; registers now hold the secret "
        "digits then the first randomness block",
    )

    others = sorted(set(range(1, p.n + 1)) - set(chosen))
    if others:  # head block has k-m = (2k-1) - d registers
        block_e = vand.submatrix([i - 1 for i in others], None)
        head = regs[p.m : p.k]
        session.affine(
            head,
            block_e.submatrix(None, range(p.m, p.k)),
            "scale the randomness-head block by the uncontacted rows' "
            "matching column block",
        )
        src = regs[: p.m] + regs[p.k :]
        coeff = block_e.submatrix(None, range(p.m)).hstack(
            block_e.submatrix(None, range(p.k, p.d))
        )
        session.controlled_add(
            src,
            head,
            coeff,
            "fold the secret and tail digits into the head block so it "
            "mirrors the uncontacted shares' first qudits",
        )
    return session.finish(regs[: p.m])


def recover_from_k(dealt: DealtState, participants: Iterable[int]) -> RecoveryResult:
    """Recover the secret from k participants, all m qudits of each.

    The received registers form m columns of k registers each (column j
    holds the contacted shares' j-th qudits).  Steps:

    1. For each column j >= 2, invert the square block of the contacted
       rows' last k Vandermonde columns; column j then holds one tail digit
       followed by the j-th randomness block.
    2. Subtract the tail digits' contribution from column 1 (controlled on
       the tail registers), leaving only the first k Vandermonde columns'
       mixing there.
    3. Invert that square block; column 1 now holds the secret then the
       randomness head.
    4. Re-randomize: map each column-j remainder (j >= 2), and afterwards
       the reassembled first randomness block, through the uncontacted
       rows' Vandermonde action so each mirrors the corresponding registers
       of the uncontacted shares.  The column maps run first because they
       are controlled on tail digits that the final map overwrites.

    The secret ends in the first m registers of the first column; cost is
    exactly m*k qudits.
    """
    p = dealt.params
    chosen = sorted(set(participants))
    if len(chosen) != p.k:
        raise ValueError(f"need exactly k={p.k} distinct participants, got {len(chosen)}")
    dealt.require_active(chosen)
    layout = dealt.layout
    cols = [tuple(layout.register_of(i, j) for i in chosen) for j in range(p.m)]
    session = _CombinerSession(
        dealt, {i: tuple(layout.register_of(i, j) for j in range(p.m)) for i in chosen}
    )

    vand = scheme_vandermonde(p)
    block_k = vand.submatrix([i - 1 for i in chosen], None)
    others = sorted(set(range(1, p.n + 1)) - set(chosen))
    last_k_cols = block_k.submatrix(None, range(p.m - 1, p.d))
    for j in range(1, p.m):
        session.affine(
            list(cols[j]),
            last_k_cols.inverse(),
            f"invert the trailing-columns block on column {j + 1}; it now holds "
            f"tail digit {j} then randomness block {j + 1}",
        )
    if p.m > 1:
        tail_regs = [cols[j][0] for j in range(1, p.m)]
        session.controlled_add(
            tail_regs,
            list(cols[0]),
            -block_k.submatrix(None, range(p.k, p.d)),
            "subtract the tail digits' contribution from column 1",
        )
    session.affine(
        list(cols[0]),
        block_k.submatrix(None, range(p.k)).inverse(),
        "invert the leading-columns block; column 1 now holds the secret "
        "then the randomness head",
    )

    if p.k > 1 and others:
        block_l = vand.submatrix([i - 1 for i in others], None)
        l_rand = block_l.submatrix(None, range(p.m, p.d))
        for j in range(1, p.m):
            rest = list(cols[j][1:])
            session.affine(
                rest,
                l_rand,
                f"re-randomize column {j + 1}'s remainder through the "
                "uncontacted rows' action",
            )
            session.controlled_add(
                [cols[j][0]],
                rest,
                block_l.submatrix(None, [p.m - 1]),
                f"add tail digit {j}'s contribution so column {j + 1} mirrors "
                "the uncontacted shares",
            )
        first_block = list(cols[0][p.m :]) + [cols[j][0] for j in range(1, p.m)]
        session.affine(
            first_block,
            l_rand,
            "re-randomize the first randomness block through the uncontacted "
            "rows' action",
        )
        session.controlled_add(
            list(cols[0][: p.m]),
            first_block,
            block_l.submatrix(None, range(p.m)),
            "add the secret's contribution so the block mirrors the "
            "uncontacted shares' first qudits",
        )
    return session.finish(cols[0][: p.m])


# ---------------------------------------------------------------------------
# Secrecy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecrecyReport:
    """Outcome of comparing a subset's reduced states across secrets."""

    subset: frozenset[int]
    max_trace_distance: float
    secrets_tested: int

    @property
    def passed(self) -> bool:
        return self.max_trace_distance <= SECRECY_TOL


def secrecy_check(
    p: SchemeParams,
    subset: Iterable[int],
    secret_pairs: Sequence[tuple[SparseState, SparseState]],
    dim_cap: int = DEFAULT_DIM_CAP,
    cap_branches: int = DEFAULT_BRANCH_CAP,
) -> SecrecyReport:
    """Max trace distance between the subset's reduced states over pairs.

    The subset must have at most k-1 participants; a scheme is leak-free on
    it iff every pair of secrets induces identical reduced states there.
    """
    members = sorted(set(subset))
    if len(members) > p.k - 1:
        raise ValueError(f"subset of {len(members)} is authorized; secrecy applies to <= k-1 = {p.k - 1}")
    if any(not 1 <= i <= p.n for i in members):
        raise ValueError(f"subset {members} not within participants 1..{p.n}")
    layout = p.layout()
    regs = [r for i in members for r in layout.registers_of(i)]
    dim = p.q ** len(regs)
    if dim > dim_cap:
        raise DimensionCapError(
            f"reduced dimension {dim} for subset {members} exceeds the cap {dim_cap}"
        )
    max_td = 0.0
    seen: set[int] = set()
    for left, right in secret_pairs:
        seen.add(id(left))
        seen.add(id(right))
        rho = deal(left, p, cap_branches).state.partial_trace(regs, dim_cap)
        sigma = deal(right, p, cap_branches).state.partial_trace(regs, dim_cap)
        max_td = max(max_td, trace_distance(rho, sigma))
    return SecrecyReport(frozenset(members), max_td, len(seen))


def default_secret_pairs(
    p: SchemeParams, seed: int = 0, extra_random: int = 1
) -> list[tuple[SparseState, SparseState]]:
    """A small deterministic set of secret pairs for secrecy checks.

    Always includes the all-zeros basis secret against the descending-digit
    basis secret, plus seeded random superposition pairs.
    """
    from .qsim import random_state

    zeros = basis_secret(p, (0,) * p.m)
    descending = basis_secret(p, tuple((p.q - 1 - i) % p.q for i in range(p.m)))
    pairs = [(zeros, descending)]
    rng = np.random.Generator(np.random.Philox(seed))
    support = None if p.q**p.m <= 64 else 2
    for _ in range(extra_random):
        pairs.append(
            (
                random_state(p.q, p.m, rng, support=support),
                random_state(p.q, p.m, rng, support=support),
            )
        )
    return pairs


def verify_complement_rule(
    p: SchemeParams,
    authorized: Iterable[int],
    secret_pairs: Sequence[tuple[SparseState, SparseState]] | None = None,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> bool:
    """Check that the complement of an authorized set learns nothing.

    For n = 2k-1 the complement of any >= k-subset has <= k-1 members, so
    this reduces to a secrecy check there; the empty complement passes
    trivially.
    """
    chosen = set(authorized)
    if len(chosen) < p.k:
        raise ValueError(f"authorized sets have at least k={p.k} members")
    if any(not 1 <= i <= p.n for i in chosen):
        raise ValueError(f"participants must lie in 1..{p.n}")
    complement = sorted(set(range(1, p.n + 1)) - chosen)
    if not complement:
        return True
    if secret_pairs is None:
        secret_pairs = default_secret_pairs(p)
    return secrecy_check(p, complement, secret_pairs, dim_cap).passed


# ---------------------------------------------------------------------------
# Mixed schemes, bounds, costs
# ---------------------------------------------------------------------------


def convert_to_mixed(dealt: DealtState, n_prime: int) -> DealtState:
    """View the scheme with only the first ``n_prime`` shares retained.

    Discarded shares' registers stay in the (pure) global state as
    environment; recovery may only contact retained participants, so the
    d-qudit procedure needs d <= n_prime.
    """
    p = dealt.params
    if not p.k <= n_prime <= p.n:
        raise ValueError(f"retained share count must satisfy k <= n' <= 2k-1, got {n_prime}")
    return DealtState(p, dealt.state, dealt.layout, frozenset(range(1, n_prime + 1)))


def _int_nth_root(value: int, n: int) -> int:
    if value < 1:
        raise ValueError("value must be positive")
    root = round(value ** (1.0 / n))
    while root > 1 and root**n > value:
        root -= 1
    while (root + 1) ** n <= value:
        root += 1
    return root


def lower_bound(secret_dim: int, k: int, d: int) -> int | float:
    """Minimum channel dimension to recover a secret of dimension M from d shares.

    Evaluates M**(d/(d-k+1)); exact integer when M is a perfect
    (d-k+1)-th power (the staircase schemes have M = q**(d-k+1), giving
    q**d), a float otherwise.
    """
    if not isinstance(secret_dim, int) or secret_dim < 2:
        raise ValueError(f"secret dimension must be an int >= 2, got {secret_dim!r}")
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    m = d - k + 1
    root = _int_nth_root(secret_dim, m)
    if root**m == secret_dim:
        return root**d
    return float(secret_dim) ** (d / m)


@dataclass(frozen=True)
class CostRow:
    """One recovery mode's communication accounting."""

    mode: str
    participants: int
    qudits: int
    qudits_per_secret_qudit: float
    channel_dim: int
    bound_dim: int | float
    optimal: bool


def cost_table(p: SchemeParams) -> list[CostRow]:
    """Per-mode communication cost against the channel-dimension bound.

    Emits the k-share row (m*k qudits, ratio k) and the d-share row (d
    qudits, ratio d/(d-k+1)); a single row when d = k since the procedures
    coincide.  ``optimal`` flags exact equality of the achieved channel
    dimension with the bound for that participant count.
    """
    rows = []
    k_dim = p.q ** (p.m * p.k)
    k_bound = lower_bound(p.q**p.m, p.k, p.k)
    rows.append(
        CostRow(
            mode="recover-k",
            participants=p.k,
            qudits=p.m * p.k,
            qudits_per_secret_qudit=p.k / 1.0,
            channel_dim=k_dim,
            bound_dim=k_bound,
            optimal=k_dim == k_bound,
        )
    )
    if p.d != p.k:
        d_dim = p.q**p.d
        d_bound = lower_bound(p.q**p.m, p.k, p.d)
        rows.append(
            CostRow(
                mode="recover-d",
                participants=p.d,
                qudits=p.d,
                qudits_per_secret_qudit=p.d / p.m,
                channel_dim=d_dim,
                bound_dim=d_bound,
                optimal=d_dim == d_bound,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Reference scheme: the classic ((2,3)) threshold code over F_3
# ---------------------------------------------------------------------------


def encode_reference_cleve23(secret: SparseState) -> SparseState:
    """Encode one qutrit as |s> -> sum_r |r, s+r, 2s+r> / sqrt(3).

    A fixture independent of the staircase construction: any two of the
    three qutrits recover the secret, any single one is maximally mixed.
    """
    if secret.q != 3:
        raise ValueError(f"reference scheme works over F_3, got q={secret.q}")
    if secret.num_registers != 1:
        raise ValueError("reference scheme shares a single qutrit")
    w = 1.0 / np.sqrt(3.0)
    branches = []
    for row, amp in zip(secret.labels, secret.amps):
        s = int(row[0])
        for r in range(3):
            branches.append(((r, (s + r) % 3, (2 * s + r) % 3), complex(amp) * w))
    return SparseState.from_branches(3, branches)
