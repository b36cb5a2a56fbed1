"""Batch simulation of consortial explorations over random targets.

Each run draws a random target closure system and a random block cover,
builds a consortium (optionally degrading some parties to pre-experts),
explores, and scores the outcome against the hidden target. Results
serialize to a stable text form so identical configs produce identical bytes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .closure import ClosureSystem, closed_masks_in_lectic_order, holds_in, intersection_closure
from .consortium import (
    Consortium,
    ConsortialDomain,
    ExpertKind,
    LocalExpertSpec,
    Mode,
    SelectionStrategy,
    restricted_views,
)
from .errors import FormatError
from .exploration import ExplorationReport, ExploreOptions, explore
from .implications import close_mask_under
from .oracles import ConsortiumOracle
from .sets import AttributeSet, Universe

_POLICIES = ("all", "first", "max-block", "sample")
_MAX_ATTRIBUTES = 12


@dataclass(frozen=True)
class SimulationConfig:
    attributes: int = 4
    runs: int = 10
    seed: int = 0
    density: float = 0.3
    blocks: int = 3
    block_size: int = 3
    mode: str = "strong"
    policy: str = "all"
    sample_size: int = 1
    combining: bool = True
    pre_share: float = 0.0
    pre_known: float = 0.5

    def validate(self) -> "SimulationConfig":
        if not 1 <= self.attributes <= _MAX_ATTRIBUTES:
            raise FormatError(f"attributes must be in 1..{_MAX_ATTRIBUTES}")
        if self.runs < 1:
            raise FormatError("runs must be positive")
        if not 0.0 <= self.density <= 1.0:
            raise FormatError("density must be in [0, 1]")
        if self.blocks < 1:
            raise FormatError("blocks must be positive")
        if not 1 <= self.block_size <= self.attributes:
            raise FormatError("block_size must be in 1..attributes")
        if self.mode not in ("strong", "sampled"):
            raise FormatError(f"unknown mode {self.mode!r}")
        if self.policy not in _POLICIES:
            raise FormatError(f"unknown policy {self.policy!r}")
        if self.sample_size < 1:
            raise FormatError("sample_size must be positive")
        if not 0.0 <= self.pre_share <= 1.0:
            raise FormatError("pre_share must be in [0, 1]")
        if not 0.0 <= self.pre_known <= 1.0:
            raise FormatError("pre_known must be in [0, 1]")
        return self

    def to_lines(self) -> list[str]:
        return [
            f"attributes = {self.attributes}",
            f"runs = {self.runs}",
            f"seed = {self.seed}",
            f"density = {self.density:.6f}",
            f"blocks = {self.blocks}",
            f"block_size = {self.block_size}",
            f"mode = {self.mode}",
            f"policy = {self.policy}",
            f"sample_size = {self.sample_size}",
            f"combining = {'on' if self.combining else 'off'}",
            f"pre_share = {self.pre_share:.6f}",
            f"pre_known = {self.pre_known:.6f}",
        ]


_INT_KEYS = {"attributes", "runs", "seed", "blocks", "block_size", "sample_size"}
_FLOAT_KEYS = {"density", "pre_share", "pre_known"}
_STR_KEYS = {"mode", "policy"}
_BOOL_KEYS = {"combining"}


def parse_config(text: str) -> SimulationConfig:
    """Read key = value lines; '#' starts a comment; later keys win."""
    config = SimulationConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise FormatError(f"expected key = value, got {stripped!r}", lineno)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key in _INT_KEYS:
                config = replace(config, **{key: int(value)})
            elif key in _FLOAT_KEYS:
                config = replace(config, **{key: float(value)})
            elif key in _STR_KEYS:
                config = replace(config, **{key: value})
            elif key in _BOOL_KEYS:
                if value not in ("on", "off"):
                    raise ValueError(f"expected on/off, got {value!r}")
                config = replace(config, **{key: value == "on"})
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
    return config.validate()


def random_closure_system(
    universe: Universe, rng: random.Random, density: float
) -> ClosureSystem:
    """Intersection closure of an independent per-subset draw (plus M)."""
    masks = {universe.full_mask}
    for mask in range(universe.full_mask):
        if rng.random() < density:
            masks.add(mask)
    return intersection_closure(universe, masks)


def random_cover(
    universe: Universe, rng: random.Random, blocks: int, block_size: int
) -> ConsortialDomain:
    """Random equal-size blocks, patched to cover every attribute.

    Attributes missed by the draw are assigned to random blocks afterwards,
    so the result is always a valid cover (at the price of some oversized
    blocks).
    """
    n = universe.size
    members = [set(rng.sample(range(n), block_size)) for _ in range(blocks)]
    covered = set().union(*members)
    for i in range(n):
        if i not in covered:
            members[rng.randrange(blocks)].add(i)
    out = []
    for chosen in members:
        mask = 0
        for i in chosen:
            mask |= 1 << i
        out.append(AttributeSet(universe, mask))
    return ConsortialDomain(universe, out)


def _random_specs(
    domain: ConsortialDomain,
    target: ClosureSystem,
    rng: random.Random,
    pre_share: float,
    pre_known: float,
) -> tuple[LocalExpertSpec, ...]:
    specs = []
    for block in domain.blocks:
        if rng.random() >= pre_share:
            specs.append(LocalExpertSpec(block))
            continue
        views = restricted_views(target, block.mask)
        knowledge = tuple(
            AttributeSet(domain.universe, v) for v in views if rng.random() < pre_known
        )
        specs.append(LocalExpertSpec(block, ExpertKind.PRE_EXPERT, knowledge))
    return tuple(specs)


@dataclass(frozen=True)
class RunResult:
    run: int
    exact: bool
    jaccard: float
    queries: int
    refutes: int
    deferred: int
    repairs: int
    false_accepts: int


@dataclass(frozen=True)
class SimulationResult:
    config: SimulationConfig
    rows: tuple[RunResult, ...]

    def serialize(self) -> str:
        lines = ["[config]"]
        lines.extend(self.config.to_lines())
        lines.append("[runs]")
        lines.append("run exact jaccard queries refutes deferred repairs false_accepts")
        for r in self.rows:
            lines.append(
                f"{r.run} {'yes' if r.exact else 'no'} {r.jaccard:.6f} "
                f"{r.queries} {r.refutes} {r.deferred} {r.repairs} {r.false_accepts}"
            )
        lines.append("[summary]")
        total = len(self.rows)
        exact = sum(1 for r in self.rows if r.exact)
        mean_jaccard = sum(r.jaccard for r in self.rows) / total
        lines.append(f"runs = {total}")
        lines.append(f"exact = {exact}")
        lines.append(f"exact_rate = {exact / total:.6f}")
        lines.append(f"mean_jaccard = {mean_jaccard:.6f}")
        lines.append(f"total_deferred = {sum(r.deferred for r in self.rows)}")
        lines.append(f"total_repairs = {sum(r.repairs for r in self.rows)}")
        lines.append(
            f"total_false_accepts = {sum(r.false_accepts for r in self.rows)}"
        )
        return "\n".join(lines) + "\n"


def _score(
    run: int, target: ClosureSystem, report: ExplorationReport
) -> RunResult:
    u = target.universe
    pairs = [(i.premise.mask, i.conclusion.mask) for i in report.base]
    result_masks = frozenset(
        closed_masks_in_lectic_order(u.size, lambda m: close_mask_under(pairs, m))
    )
    inter = len(result_masks & target.masks)
    union = len(result_masks | target.masks)
    false_accepts = sum(1 for i in report.base if not holds_in(i, target))
    return RunResult(
        run=run,
        exact=result_masks == target.masks,
        jaccard=inter / union,
        queries=report.queries,
        refutes=report.refutes,
        deferred=len(report.deferred),
        repairs=report.repairs,
        false_accepts=false_accepts,
    )


def run_simulation(config: SimulationConfig) -> SimulationResult:
    config = config.validate()
    universe = Universe(tuple(f"m{i}" for i in range(config.attributes)))
    rows = []
    for run in range(config.runs):
        rng = random.Random(f"{config.seed}:{run}")
        target = random_closure_system(universe, rng, config.density)
        domain = random_cover(universe, rng, config.blocks, config.block_size)
        specs = _random_specs(domain, target, rng, config.pre_share, config.pre_known)
        strategy = SelectionStrategy(
            policy=config.policy, sample_size=config.sample_size, seed=config.seed
        )
        consortium = Consortium(
            domain,
            specs,
            Mode.STRONG if config.mode == "strong" else Mode.SAMPLED,
            strategy,
        )
        oracle = ConsortiumOracle(consortium, target)
        report = explore(
            oracle, universe, ExploreOptions(combining=config.combining)
        )
        rows.append(_score(run, target, report))
    return SimulationResult(config, tuple(rows))
