"""Batch front-end: scenario sweeps, the worked demo, and cost tables.

Verbs::

    qtss run <config>      # sweep the configured scenarios, emit a report
    qtss demo [--secret]   # step-by-step walkthrough of the smallest scheme
    qtss costs <k> <d> <q> # communication cost table for one parameter set

Config files are flat ``key = value`` text; ``#`` starts a comment::

    params = 2,3,5; 3,4,7        # (k, d, q) triples
    modes = encode, recover-d, recover-k, secrecy, costs, mixed
    secrets = random:4           # or: basis-exhaustive
    seed = 7
    output = report.json
    format = json                # or: csv
    cap_branches = 10000000
    cap_dim = 4096

Reports are deterministic for a fixed config and seed: the JSON bytes are
identical across runs (wall-clock timings go to stdout only, never into the
report).  Exit codes: 0 all scenarios pass, 1 some invariant failed, 2 the
config was invalid.  Scenarios that would exceed a cap are reported with
status ``cap-exceeded`` and do not fail the run.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from .protocol import (
    basis_secret,
    convert_to_mixed,
    cost_table,
    deal,
    lower_bound,
    recover_from_d,
    recover_from_k,
    secrecy_check,
)
from .qsim import (
    DEFAULT_DIM_CAP,
    MATCH_TOL,
    DimensionCapError,
    SparseState,
    factor_check,
    fidelity,
    random_state,
    superpose,
)
from .staircase import (
    DEFAULT_BRANCH_CAP,
    EnumerationCapError,
    ParameterError,
    SchemeParams,
    enumerate_codewords,
    make_params,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "RunRecord",
    "RunReport",
    "ALL_MODES",
    "DEFAULT_GRID",
    "parse_config",
    "load_config",
    "run",
    "demo",
    "emit_cost_table",
    "main",
]

SCHEMA_VERSION = 1

ALL_MODES = ("encode", "recover-d", "recover-k", "secrecy", "costs", "mixed")

# Parameter sets with q > n whose sweeps stay within the default caps for
# encoding (branch counts) except the last, which is costs-only territory.
DEFAULT_GRID = (
    (2, 2, 5),
    (2, 3, 5),
    (3, 3, 7),
    (3, 4, 7),
    (3, 5, 7),
    (4, 5, 11),
    (4, 7, 11),
)


class ConfigError(ValueError):
    """The scenario configuration is malformed or invalid."""


@dataclass(frozen=True)
class ScenarioConfig:
    params: tuple[tuple[int, int, int], ...]
    modes: tuple[str, ...] = ALL_MODES
    secrets: str = "random:3"
    seed: int = 0
    output: str | None = None
    format: str = "json"
    cap_branches: int = DEFAULT_BRANCH_CAP
    cap_dim: int = DEFAULT_DIM_CAP

    def __post_init__(self) -> None:
        if not self.params:
            raise ConfigError("config names no parameter sets")
        for triple in self.params:
            try:
                make_params(*triple)
            except ParameterError as exc:
                raise ConfigError(f"invalid params {triple}: {exc}") from exc
        bad = [m for m in self.modes if m not in ALL_MODES]
        if bad:
            raise ConfigError(f"unknown modes {bad}; valid: {list(ALL_MODES)}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if not (self.secrets == "basis-exhaustive" or self.secrets.startswith("random:")):
            raise ConfigError(f"secrets must be 'basis-exhaustive' or 'random:<count>', got {self.secrets!r}")
        if self.secrets.startswith("random:"):
            try:
                count = int(self.secrets.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigError(f"bad random secret count in {self.secrets!r}") from exc
            if count < 1:
                raise ConfigError("random secret count must be positive")

    @property
    def random_count(self) -> int | None:
        if self.secrets.startswith("random:"):
            return int(self.secrets.split(":", 1)[1])
        return None

    def snapshot(self) -> dict:
        return {
            "params": [list(t) for t in self.params],
            "modes": list(self.modes),
            "secrets": self.secrets,
            "seed": self.seed,
            "format": self.format,
            "cap_branches": self.cap_branches,
            "cap_dim": self.cap_dim,
        }


def parse_config(text: str) -> ScenarioConfig:
    """Parse the flat key = value config grammar."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip().lower()] = val.strip()

    def parse_params(text: str) -> tuple[tuple[int, int, int], ...]:
        triples = []
        for chunk in text.replace(";", " ").split():
            parts = chunk.split(",")
            if len(parts) != 3:
                raise ConfigError(f"params entry {chunk!r} is not a k,d,q triple")
            try:
                triples.append(tuple(int(x) for x in parts))
            except ValueError as exc:
                raise ConfigError(f"params entry {chunk!r} is not numeric") from exc
        return tuple(triples)

    if "params" not in values:
        raise ConfigError("config must set 'params'")
    kwargs: dict = {"params": parse_params(values.pop("params"))}
    if "modes" in values:
        kwargs["modes"] = tuple(values.pop("modes").replace(",", " ").split())
    if "secrets" in values:
        kwargs["secrets"] = values.pop("secrets")
    for key in ("seed", "cap_branches", "cap_dim"):
        if key in values:
            try:
                kwargs[key] = int(values.pop(key))
            except ValueError as exc:
                raise ConfigError(f"{key} must be an integer") from exc
    if "output" in values:
        kwargs["output"] = values.pop("output")
    if "format" in values:
        kwargs["format"] = values.pop("format")
    if values:
        raise ConfigError(f"unknown config keys: {sorted(values)}")
    return ScenarioConfig(**kwargs)


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


# ---------------------------------------------------------------------------
# Run records
# ---------------------------------------------------------------------------


@dataclass
class RunRecord:
    """Outcome of one (parameter set, mode) scenario."""

    k: int
    n: int
    d: int
    q: int
    m: int
    mode: str
    status: str = "pass"  # pass | fail | cap-exceeded
    detail: str = ""
    subsets_tested: int = 0
    secrets_tested: int = 0
    min_fidelity: float | None = None
    max_trace_distance: float | None = None
    qudit_cost: int | None = None
    channel_dim: int | None = None
    bound_dim: float | int | None = None
    optimal: bool | None = None
    metrics: dict = field(default_factory=dict)
    wall_time: float = 0.0  # stdout summary only; never serialized

    def fail(self, detail: str) -> None:
        self.status = "fail"
        self.detail = detail if not self.detail else f"{self.detail}; {detail}"

    def to_json_obj(self) -> dict:
        obj = {
            "k": self.k,
            "n": self.n,
            "d": self.d,
            "q": self.q,
            "m": self.m,
            "mode": self.mode,
            "status": self.status,
            "detail": self.detail,
            "subsets_tested": self.subsets_tested,
            "secrets_tested": self.secrets_tested,
            "min_fidelity": self.min_fidelity,
            "max_trace_distance": self.max_trace_distance,
            "qudit_cost": self.qudit_cost,
            "channel_dim": self.channel_dim,
            "bound_dim": self.bound_dim,
            "optimal": self.optimal,
            "metrics": self.metrics,
        }
        return obj


@dataclass
class RunReport:
    config: ScenarioConfig
    records: list[RunRecord]

    @property
    def overall_pass(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def to_json_bytes(self) -> bytes:
        obj = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.snapshot(),
            "records": [r.to_json_obj() for r in self.records],
            "overall_pass": self.overall_pass,
        }
        return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        cols = [
            "k", "n", "d", "q", "m", "mode", "status", "detail",
            "subsets_tested", "secrets_tested", "min_fidelity",
            "max_trace_distance", "qudit_cost", "channel_dim", "bound_dim",
            "optimal",
        ]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in self.records:
            obj = r.to_json_obj()
            writer.writerow(["" if obj[c] is None else obj[c] for c in cols])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# Secret selection
# ---------------------------------------------------------------------------


def _scenario_rng(seed: int, triple: tuple[int, int, int], mode: str) -> np.random.Generator:
    # Counter-based generator keyed on (seed, params, mode) so scenario order
    # cannot perturb the draws.
    entropy = (seed, *triple, ALL_MODES.index(mode) + 1)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _pick_secrets(
    cfg: ScenarioConfig, p: SchemeParams, mode: str
) -> tuple[list[SparseState], str] | None:
    """Secrets to test for one scenario, or None if caps forbid the sweep.

    Random secrets are drawn uniformly on the unit sphere over all q**m
    basis labels when the resulting state fits the branch cap, otherwise on
    a random 2-label support so superposition behaviour is still exercised.
    """
    count = cfg.random_count
    per_basis = p.branch_count
    if per_basis > cfg.cap_branches:
        return None
    if count is None:
        total = p.q**p.m
        if total * per_basis > cfg.cap_branches:
            return None
        secrets = [
            basis_secret(p, digits)
            for digits in itertools.product(range(p.q), repeat=p.m)
        ]
        return secrets, "basis-exhaustive"
    rng = _scenario_rng(cfg.seed, (p.k, p.d, p.q), mode)
    full_dim = p.q**p.m
    support = full_dim if full_dim * per_basis <= cfg.cap_branches else 2
    if support * per_basis > cfg.cap_branches:
        return None
    secrets = [random_state(p.q, p.m, rng, support=support) for _ in range(count)]
    return secrets, f"random:{count}"


# ---------------------------------------------------------------------------
# Mode executors
# ---------------------------------------------------------------------------


def _run_encode(cfg: ScenarioConfig, p: SchemeParams, rec: RunRecord) -> None:
    picked = _pick_secrets(cfg, p, "encode")
    if picked is None:
        rec.status = "cap-exceeded"
        rec.detail = f"branch count {p.branch_count} per basis secret exceeds cap {cfg.cap_branches}"
        return
    secrets, _ = picked
    worst_norm = 0.0
    for secret in secrets:
        dealt = deal(secret, p, cfg.cap_branches)
        expected = secret.num_branches * p.branch_count
        if dealt.state.num_branches != expected:
            rec.fail(
                f"expected {expected} branches, got {dealt.state.num_branches}"
            )
        worst_norm = max(worst_norm, abs(dealt.state.norm_sq - 1.0))
        rec.secrets_tested += 1
    # Cross-check the dealer against per-codeword encoding where cheap.
    if p.branch_count <= 50_000:
        digits = (0,) * (p.m - 1) + (1,)
        basis = basis_secret(p, digits)
        dealt = deal(basis, p, cfg.cap_branches)
        labels = {tuple(int(x) for x in row) for row in dealt.state.labels}
        from .gf import FieldVector

        expected_labels = {
            tuple(e for e in codeword.entries)
            for _, codeword in enumerate_codewords(
                FieldVector(p.field, digits), p, cfg.cap_branches
            )
        }
        if labels != expected_labels:
            rec.fail("dealt branches disagree with codeword enumeration")
    rec.metrics["max_norm_error"] = worst_norm
    if worst_norm > 1e-12:
        rec.fail(f"norm error {worst_norm} above 1e-12")


def _run_recovery(cfg: ScenarioConfig, p: SchemeParams, rec: RunRecord, mode: str) -> None:
    picked = _pick_secrets(cfg, p, mode)
    if picked is None:
        rec.status = "cap-exceeded"
        rec.detail = f"branch count {p.branch_count} per basis secret exceeds cap {cfg.cap_branches}"
        return
    secrets, _ = picked
    size = p.d if mode == "recover-d" else p.k
    expected_cost = p.d if mode == "recover-d" else p.m * p.k
    recover = recover_from_d if mode == "recover-d" else recover_from_k
    min_fid = 1.0
    subsets = list(itertools.combinations(range(1, p.n + 1), size))
    rec.subsets_tested = len(subsets)
    for secret in secrets:
        dealt = deal(secret, p, cfg.cap_branches)
        for subset in subsets:
            result = recover(dealt, subset)
            t = result.transcript
            if t.qudit_cost != expected_cost:
                rec.fail(f"subset {subset}: cost {t.qudit_cost} != {expected_cost}")
            rho = result.state.partial_trace(result.secret_registers, cfg.cap_dim)
            fid = fidelity(rho, secret)
            min_fid = min(min_fid, fid)
            if fid < 1.0 - MATCH_TOL:
                rec.fail(f"subset {subset}: fidelity {fid} below 1 - 1e-10")
            if abs(rho.purity() - 1.0) > MATCH_TOL:
                rec.fail(f"subset {subset}: secret block not disentangled")
    rec.secrets_tested = len(secrets)
    rec.min_fidelity = min_fid
    rec.qudit_cost = expected_cost
    rec.channel_dim = p.q**expected_cost
    if mode == "recover-d":
        rec.bound_dim = lower_bound(p.q**p.m, p.k, p.d)
        rec.optimal = rec.channel_dim == rec.bound_dim


def _run_secrecy(cfg: ScenarioConfig, p: SchemeParams, rec: RunRecord) -> None:
    picked = _pick_secrets(cfg, p, "secrecy")
    if picked is None:
        rec.status = "cap-exceeded"
        rec.detail = f"branch count {p.branch_count} per basis secret exceeds cap {cfg.cap_branches}"
        return
    secrets, _ = picked
    pairs = [(a, b) for a, b in zip(secrets[::2], secrets[1::2])]
    if not pairs and len(secrets) >= 2:
        pairs = [(secrets[0], secrets[1])]
    if not pairs:
        pairs = [(secrets[0], secrets[0])]
    max_td = 0.0
    skipped = 0
    for size in range(1, p.k):
        for subset in itertools.combinations(range(1, p.n + 1), size):
            if p.q ** (p.m * size) > cfg.cap_dim:
                skipped += 1
                continue
            report = secrecy_check(p, subset, pairs, cfg.cap_dim, cfg.cap_branches)
            rec.subsets_tested += 1
            max_td = max(max_td, report.max_trace_distance)
            if not report.passed:
                rec.fail(f"subset {subset}: trace distance {report.max_trace_distance} above 1e-10")
    rec.secrets_tested = len(secrets)
    rec.max_trace_distance = max_td
    if skipped:
        rec.metrics["subsets_over_dim_cap"] = skipped
    if rec.subsets_tested == 0 and skipped:
        rec.status = "cap-exceeded"
        rec.detail = f"all {skipped} subsets exceed the dimension cap {cfg.cap_dim}"


def _run_costs(cfg: ScenarioConfig, p: SchemeParams, rec: RunRecord) -> None:
    rows = cost_table(p)
    rec.metrics["rows"] = [
        {
            "mode": r.mode,
            "participants": r.participants,
            "qudits": r.qudits,
            "ratio": r.qudits_per_secret_qudit,
            "channel_dim": r.channel_dim,
            "bound_dim": r.bound_dim,
            "optimal": r.optimal,
        }
        for r in rows
    ]
    d_rows = [r for r in rows if r.mode == "recover-d"] or rows
    rec.qudit_cost = d_rows[0].qudits
    rec.channel_dim = d_rows[0].channel_dim
    rec.bound_dim = d_rows[0].bound_dim
    rec.optimal = d_rows[0].optimal
    if not all(r.optimal for r in rows):
        rec.fail("achieved channel dimension misses the lower bound")


def _run_mixed(cfg: ScenarioConfig, p: SchemeParams, rec: RunRecord) -> None:
    """Re-verify recovery and secrecy after discarding shares down to max(k, d)."""
    n_prime = max(p.k, p.d)
    rec.metrics["retained_shares"] = n_prime
    picked = _pick_secrets(cfg, p, "mixed")
    if picked is None:
        rec.status = "cap-exceeded"
        rec.detail = f"branch count {p.branch_count} per basis secret exceeds cap {cfg.cap_branches}"
        return
    secrets, _ = picked
    secrets = secrets[:4] if len(secrets) > 4 else secrets
    retained = range(1, n_prime + 1)
    min_fid = 1.0
    for secret in secrets:
        dealt = convert_to_mixed(deal(secret, p, cfg.cap_branches), n_prime)
        for subset in itertools.combinations(retained, p.k):
            res = recover_from_k(dealt, subset)
            rho = res.state.partial_trace(res.secret_registers, cfg.cap_dim)
            fid = fidelity(rho, secret)
            min_fid = min(min_fid, fid)
            if fid < 1.0 - MATCH_TOL:
                rec.fail(f"retained k-subset {subset}: fidelity {fid} below 1 - 1e-10")
            rec.subsets_tested += 1
        for subset in itertools.combinations(retained, p.d):
            res = recover_from_d(dealt, subset)
            rho = res.state.partial_trace(res.secret_registers, cfg.cap_dim)
            fid = fidelity(rho, secret)
            min_fid = min(min_fid, fid)
            if fid < 1.0 - MATCH_TOL:
                rec.fail(f"retained d-subset {subset}: fidelity {fid} below 1 - 1e-10")
            rec.subsets_tested += 1
    pairs = [(a, b) for a, b in zip(secrets[::2], secrets[1::2])] or [(secrets[0], secrets[0])]
    max_td = 0.0
    for size in range(1, p.k):
        for subset in itertools.combinations(retained, size):
            if p.q ** (p.m * size) > cfg.cap_dim:
                continue
            report = secrecy_check(p, subset, pairs, cfg.cap_dim, cfg.cap_branches)
            max_td = max(max_td, report.max_trace_distance)
            if not report.passed:
                rec.fail(f"retained subset {subset}: trace distance {report.max_trace_distance} above 1e-10")
    rec.secrets_tested = len(secrets)
    rec.min_fidelity = min_fid
    rec.max_trace_distance = max_td


_MODE_RUNNERS = {
    "encode": _run_encode,
    "secrecy": _run_secrecy,
    "costs": _run_costs,
    "mixed": _run_mixed,
}


def run(cfg: ScenarioConfig) -> RunReport:
    """Execute all requested modes over all parameter sets."""
    records: list[RunRecord] = []
    for triple in cfg.params:
        p = make_params(*triple)
        modes = list(cfg.modes)
        if p.d == p.k and "recover-d" in modes and "recover-k" in modes:
            # The procedures coincide when d = k; a single record covers both.
            modes.remove("recover-d")
        for mode in modes:
            rec = RunRecord(k=p.k, n=p.n, d=p.d, q=p.q, m=p.m, mode=mode)
            if mode == "recover-k" and p.d == p.k and "recover-d" in cfg.modes:
                rec.detail = "d = k: bandwidth-efficient recovery coincides with threshold recovery"
            start = time.perf_counter()
            try:
                if mode in ("recover-d", "recover-k"):
                    _run_recovery(cfg, p, rec, mode)
                else:
                    _MODE_RUNNERS[mode](cfg, p, rec)
            except (EnumerationCapError, DimensionCapError) as exc:
                rec.status = "cap-exceeded"
                rec.detail = str(exc)
            rec.wall_time = time.perf_counter() - start
            records.append(rec)
    return RunReport(cfg, records)


# ---------------------------------------------------------------------------
# Cost tables
# ---------------------------------------------------------------------------


def emit_cost_table(param_sets: Sequence[tuple[int, int, int]]) -> list[dict]:
    """Rows of (k,n,d,q,m,mode,qudits,ratio,bound_dim,optimal) per mode."""
    rows = []
    for triple in param_sets:
        p = make_params(*triple)
        for r in cost_table(p):
            rows.append(
                {
                    "k": p.k,
                    "n": p.n,
                    "d": p.d,
                    "q": p.q,
                    "m": p.m,
                    "mode": r.mode,
                    "qudits": r.qudits,
                    "ratio": r.qudits_per_secret_qudit,
                    "bound_dim": r.bound_dim,
                    "optimal": r.optimal,
                }
            )
    return rows


def _cost_rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    cols = ["k", "n", "d", "q", "m", "mode", "qudits", "ratio", "bound_dim", "optimal"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([row[c] for c in cols])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Demo
# ---------------------------------------------------------------------------


def _demo_secret(p: SchemeParams, spec: str) -> SparseState:
    if spec == "superposition":
        a = basis_secret(p, (1, 0))
        b = basis_secret(p, (0, 1))
        return superpose([(a, 1 / np.sqrt(2)), (b, 1j / np.sqrt(2))])
    digits = tuple(int(c) for c in spec)
    if len(digits) != p.m or any(not 0 <= x < p.q for x in digits):
        raise ConfigError(f"demo secret must be {p.m} digits below {p.q}, or 'superposition'")
    return basis_secret(p, digits)


def demo(secret_spec: str = "10", stream: TextIO | None = None) -> int:
    """Walk through the smallest interesting scheme, printing each step."""
    out = stream or sys.stdout
    p = make_params(2, 3, 5)
    secret = _demo_secret(p, secret_spec)

    def w(line: str = "") -> None:
        print(line, file=out)

    w(f"Threshold scheme ((k={p.k}, n={p.n}, d={p.d})) over F_{p.q}; secret is m={p.m} qudits.")
    w(f"Secret state: {secret_spec!r} ({secret.num_branches} basis component(s))")
    w()
    dealt = deal(secret, p)
    w(f"Dealer output: {dealt.state.num_branches} branches over {dealt.state.num_registers} registers")
    w(f"(participant i holds registers {{2i-2, 2i-1}}; one codeword digit per register)")
    dump_lines = dealt.state.dump().splitlines()
    shown = dump_lines[:8]
    w("Branch dump" + (f" (first {len(shown)} of {len(dump_lines)}):" if len(dump_lines) > len(shown) else ":"))
    for line in shown:
        w("  " + line)
    w()

    def show_recovery(title: str, result) -> None:
        t = result.transcript
        w(title)
        w(f"  registers received: {sorted(t.accessed.items())}")
        for idx, op in enumerate(t.operations, start=1):
            loc = f"targets {op.targets}" + (f", controls {op.sources}" if op.sources else "")
            w(f"  {idx}. {op.kind} on {loc}")
            w(f"     {op.note}")
        rho = result.state.partial_trace(result.secret_registers)
        fid = fidelity(rho, secret)
        ok = factor_check(result.state, result.secret_registers, secret)
        w(f"  secret registers: {result.secret_registers}; fidelity = {fid:.10f}")
        w(f"  fully disentangled from the rest: {ok}")
        bound = lower_bound(p.q**p.m, p.k, t.qudit_cost) if t.qudit_cost >= p.k else None
        w(
            f"  communication: {t.qudit_cost} qudits (channel dimension {t.channel_dim})"
            + (f"; lower bound {bound} -> optimal" if bound == t.channel_dim else "")
        )
        w()

    show_recovery(
        f"Recovery from all d={p.d} participants, one qudit each:",
        recover_from_d(dealt, [1, 2, 3]),
    )
    show_recovery(
        f"Recovery from k={p.k} participants (1 and 2), all their qudits:",
        recover_from_k(dealt, [1, 2]),
    )
    w("Residual registers carry a secret-independent state; any superposed")
    w("secret therefore comes out intact, as the fidelity line shows.")
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="run the scenarios in a config file")
    p_run.add_argument("config", help="path to a key = value scenario config")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--out", default=None, help="override the report output path")
    p_run.add_argument("--format", choices=("json", "csv"), default=None)
    p_run.add_argument("--cap-branches", type=int, default=None)
    p_run.add_argument("--cap-dim", type=int, default=None)

    p_demo = sub.add_parser("demo", help="step-by-step walkthrough of the ((2,3,3)) scheme over F_5")
    p_demo.add_argument("--secret", default="10", help="secret digits, or 'superposition'")

    p_costs = sub.add_parser("costs", help="communication cost table for one parameter set")
    p_costs.add_argument("k", type=int)
    p_costs.add_argument("d", type=int)
    p_costs.add_argument("q", type=int)
    p_costs.add_argument("--format", choices=("json", "csv"), default="csv")
    p_costs.add_argument("--out", default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "run":
            cfg = load_config(args.config)
            overrides = {}
            if args.seed is not None:
                overrides["seed"] = args.seed
            if args.out is not None:
                overrides["output"] = args.out
            if args.format is not None:
                overrides["format"] = args.format
            if args.cap_branches is not None:
                overrides["cap_branches"] = args.cap_branches
            if args.cap_dim is not None:
                overrides["cap_dim"] = args.cap_dim
            if overrides:
                cfg = ScenarioConfig(**{**cfg.__dict__, **overrides})
            report = run(cfg)
            payload = (
                report.to_json_bytes()
                if cfg.format == "json"
                else report.to_csv_text().encode()
            )
            if cfg.output:
                Path(cfg.output).parent.mkdir(parents=True, exist_ok=True)
                Path(cfg.output).write_bytes(payload)
            else:
                sys.stdout.write(payload.decode())
            for rec in report.records:
                marker = {"pass": "ok  ", "fail": "FAIL", "cap-exceeded": "cap "}[rec.status]
                print(
                    f"[{marker}] k={rec.k} d={rec.d} q={rec.q} {rec.mode}: "
                    f"{rec.detail or 'all checks passed'} ({rec.wall_time:.2f}s)",
                    file=sys.stderr,
                )
            return 0 if report.overall_pass else 1
        if args.verb == "demo":
            return demo(args.secret)
        if args.verb == "costs":
            try:
                rows = emit_cost_table([(args.k, args.d, args.q)])
            except ParameterError as exc:
                raise ConfigError(str(exc)) from exc
            if args.format == "json":
                payload = json.dumps(rows, sort_keys=True, indent=2) + "\n"
            else:
                payload = _cost_rows_csv(rows)
            if args.out:
                Path(args.out).write_text(payload)
            else:
                sys.stdout.write(payload)
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
