"""Task universe construction, train/test splits, and dataset files.

A dataset directory holds ``train.txt`` and ``test.txt`` with one example
per line in the form ``IN: <source tokens> OUT: <target tokens>``, plus a
``manifest.json`` recording the split recipe, counts, and content digests.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

from . import grammar, semantics
from ._version import __version__
from .grammar import Command, DerivationTree
from .semantics import ActionSequence

TRAIN_FILE = "train.txt"
TEST_FILE = "test.txt"
MANIFEST_FILE = "manifest.json"

DEFAULT_SIMPLE_FRACTION = 0.8
DEFAULT_LENGTH_THRESHOLD = 22

SHUFFLE_GENERATOR = "splitmix64-fisher-yates"
DIGEST_ALGORITHM = "sha256-of-sorted-pair-lines"

PRIMITIVE_SPLIT_TOKENS = ("jump", "turn_left")

# Derivation-level membership predicate and the bare command kept in train,
# per primitive split.
_PRIMITIVE_MARKERS = {
    "jump": (grammar.P_U_JUMP, ("jump",)),
    "turn_left": (grammar.P_D_TURN_LEFT, ("turn", "left")),
}


class DegenerateSplit(ValueError):
    """A split recipe that would leave train or test empty."""


class FormatViolation(ValueError):
    """A dataset or manifest file that violates the on-disk format."""

    def __init__(self, path: Path | str, reason: str, line_number: int | None = None):
        self.path = str(path)
        self.reason = reason
        self.line_number = line_number
        where = f"{self.path}:{line_number}" if line_number is not None else self.path
        super().__init__(f"{where}: {reason}")


class Direction(str, Enum):
    """Which way the task is posed over the same (command, actions) pairs."""

    SCAN = "scan"  # source = command, target = actions
    NACS = "nacs"  # source = actions, target = command


@dataclass(frozen=True)
class TaskPair:
    command: Command
    actions: ActionSequence
    derivation: DerivationTree


@dataclass(frozen=True)
class SplitSpec:
    """Declarative split recipe; invalid parameter combinations are rejected."""

    kind: str
    direction: Direction
    fraction: float | None = None
    seed: int | None = None
    threshold: int | None = None
    primitive: str | None = None

    def __post_init__(self):
        if not isinstance(self.direction, Direction):
            raise ValueError(f"direction must be a Direction, got {self.direction!r}")
        forbidden = {
            "simple": ("threshold", "primitive"),
            "length": ("fraction", "seed", "primitive"),
            "primitive": ("fraction", "seed", "threshold"),
        }
        if self.kind not in forbidden:
            raise ValueError(f"unknown split kind {self.kind!r}")
        for name in forbidden[self.kind]:
            if getattr(self, name) is not None:
                raise ValueError(f"{name} does not apply to the {self.kind} split")
        if self.kind == "simple":
            if self.fraction is None or not 0.0 < self.fraction < 1.0:
                raise ValueError("simple split needs a train fraction strictly between 0 and 1")
            if self.seed is None:
                raise ValueError("simple split needs a seed")
        elif self.kind == "length":
            # A threshold below the minimum action length is caught later as
            # a DegenerateSplit (empty train side).
            if self.threshold is None:
                raise ValueError("length split needs an action-length threshold")
        elif self.primitive not in _PRIMITIVE_MARKERS:
            raise ValueError(f"primitive must be one of {PRIMITIVE_SPLIT_TOKENS}")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "direction": self.direction.value}
        for name in ("fraction", "seed", "threshold", "primitive"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        if self.kind == "simple":
            out["generator"] = SHUFFLE_GENERATOR
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SplitSpec":
        return cls(
            kind=data["kind"],
            direction=Direction(data["direction"]),
            fraction=data.get("fraction"),
            seed=data.get("seed"),
            threshold=data.get("threshold"),
            primitive=data.get("primitive"),
        )


@dataclass(frozen=True)
class Manifest:
    """Reproducibility record for one emitted dataset directory."""

    version: str
    direction: Direction
    split: dict
    train_count: int
    test_count: int
    train_digest: str
    test_digest: str
    digest_algorithm: str = DIGEST_ALGORITHM

    def to_json(self) -> str:
        data = {
            "version": self.version,
            "direction": self.direction.value,
            "split": self.split,
            "train_count": self.train_count,
            "test_count": self.test_count,
            "train_digest": self.train_digest,
            "test_digest": self.test_digest,
            "digest_algorithm": self.digest_algorithm,
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str, path: Path | str = MANIFEST_FILE) -> "Manifest":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatViolation(path, f"manifest is not valid JSON: {exc}") from exc
        try:
            return cls(
                version=data["version"],
                direction=Direction(data["direction"]),
                split=data["split"],
                train_count=data["train_count"],
                test_count=data["test_count"],
                train_digest=data["train_digest"],
                test_digest=data["test_digest"],
                digest_algorithm=data["digest_algorithm"],
            )
        except (KeyError, ValueError) as exc:
            raise FormatViolation(path, f"manifest missing or bad field: {exc}") from exc


@dataclass(frozen=True)
class Dataset:
    train: tuple[TaskPair, ...]
    test: tuple[TaskPair, ...]
    spec: SplitSpec
    manifest: Manifest


@functools.lru_cache(maxsize=1)
def build_universe() -> tuple[TaskPair, ...]:
    """All 20,910 (command, actions, derivation) pairs in canonical order."""
    return tuple(
        TaskPair(grammar.render(tree), semantics.interpret(tree), tree)
        for tree in grammar.enumerate_trees(grammar.START_SYMBOL)
    )


def _pairs_digest(pairs: Sequence[TaskPair]) -> str:
    lines = sorted(f"{' '.join(p.command)}\t{' '.join(p.actions)}" for p in pairs)
    return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()


def _make_dataset(spec: SplitSpec, train: Sequence[TaskPair], test: Sequence[TaskPair]) -> Dataset:
    if not train or not test:
        raise DegenerateSplit(f"{spec.kind} split left an empty side (train={len(train)}, test={len(test)})")
    manifest = Manifest(
        version=__version__,
        direction=spec.direction,
        split=spec.to_dict(),
        train_count=len(train),
        test_count=len(test),
        train_digest=_pairs_digest(train),
        test_digest=_pairs_digest(test),
    )
    return Dataset(tuple(train), tuple(test), spec, manifest)


_MASK64 = (1 << 64) - 1


def _splitmix64_stream(seed: int) -> Iterator[int]:
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def _shuffled_indices(n: int, seed: int) -> list[int]:
    # Fisher-Yates driven by splitmix64, fixed here so that identical seeds
    # reproduce identical partitions on every platform.
    indices = list(range(n))
    stream = _splitmix64_stream(seed)
    for i in range(n - 1, 0, -1):
        j = next(stream) % (i + 1)
        indices[i], indices[j] = indices[j], indices[i]
    return indices


def split_simple(spec: SplitSpec, universe: Sequence[TaskPair]) -> Dataset:
    """Seeded uniform partition: floor(fraction * N) train pairs, rest test."""
    if spec.kind != "simple":
        raise ValueError(f"expected a simple split spec, got {spec.kind!r}")
    # Exact decimal arithmetic so that e.g. 0.7 * 20910 floors to 14637.
    train_size = math.floor(Fraction(str(spec.fraction)) * len(universe))
    order = _shuffled_indices(len(universe), spec.seed)
    train = [universe[i] for i in order[:train_size]]
    test = [universe[i] for i in order[train_size:]]
    return _make_dataset(spec, train, test)


def split_length(spec: SplitSpec, universe: Sequence[TaskPair]) -> Dataset:
    """Train on action sequences up to the threshold, test on longer ones."""
    if spec.kind != "length":
        raise ValueError(f"expected a length split spec, got {spec.kind!r}")
    train = [p for p in universe if len(p.actions) <= spec.threshold]
    test = [p for p in universe if len(p.actions) > spec.threshold]
    return _make_dataset(spec, train, test)


def split_primitive(spec: SplitSpec, universe: Sequence[TaskPair]) -> Dataset:
    """Isolate a primitive: train sees it only as the bare command.

    Membership is decided on the derivation tree (does it use the primitive's
    production?), not on surface tokens: "walk left" trains the turn-left
    action without ever using the turn-left production.
    """
    if spec.kind != "primitive":
        raise ValueError(f"expected a primitive split spec, got {spec.kind!r}")
    marker, bare_command = _PRIMITIVE_MARKERS[spec.primitive]
    def uses_marker(pair: TaskPair) -> bool:
        return any(node.production == marker for node in pair.derivation.walk())
    train = [p for p in universe if not uses_marker(p) or p.command == bare_command]
    test = [p for p in universe if uses_marker(p) and p.command != bare_command]
    return _make_dataset(spec, train, test)


_SPLITTERS = {"simple": split_simple, "length": split_length, "primitive": split_primitive}


def make_split(spec: SplitSpec, universe: Sequence[TaskPair] | None = None) -> Dataset:
    if universe is None:
        universe = build_universe()
    return _SPLITTERS[spec.kind](spec, universe)


def orient(pairs: Sequence[TaskPair], direction: Direction) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Pose pairs as (source, target) examples for the given direction.

    Membership and order are untouched; NACS keeps duplicate sources (same
    actions, different commands) as distinct examples.
    """
    if direction is Direction.SCAN:
        return [(p.command, p.actions) for p in pairs]
    return [(p.actions, p.command) for p in pairs]


def format_line(source: Sequence[str], target: Sequence[str]) -> str:
    return f"IN: {' '.join(source)} OUT: {' '.join(target)}"


def write_dataset(dataset: Dataset, directory: Path | str, direction: Direction | None = None) -> Path:
    """Emit train.txt, test.txt, and manifest.json; returns the directory."""
    direction = dataset.spec.direction if direction is None else direction
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = dataset.manifest
    if direction is not manifest.direction:
        manifest = Manifest(
            version=manifest.version,
            direction=direction,
            split=manifest.split,
            train_count=manifest.train_count,
            test_count=manifest.test_count,
            train_digest=manifest.train_digest,
            test_digest=manifest.test_digest,
            digest_algorithm=manifest.digest_algorithm,
        )
    for name, side in ((TRAIN_FILE, dataset.train), (TEST_FILE, dataset.test)):
        lines = [format_line(src, tgt) for src, tgt in orient(side, direction)]
        (out_dir / name).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    (out_dir / MANIFEST_FILE).write_text(manifest.to_json(), encoding="utf-8")
    return out_dir


def parse_line(line: str, direction: Direction, path: Path | str, line_number: int) -> TaskPair:
    """Reconstruct a TaskPair from one dataset line, validating as it goes."""
    if not line.startswith("IN: "):
        raise FormatViolation(path, "line must start with 'IN: '", line_number)
    body = line[len("IN: "):]
    source_text, sep, target_text = body.partition(" OUT: ")
    if not sep:
        raise FormatViolation(path, "line is missing ' OUT: '", line_number)
    for text in (source_text, target_text):
        if not text or " ".join(text.split()) != text:
            raise FormatViolation(path, "tokens must be single-space separated", line_number)
    source, target = tuple(source_text.split()), tuple(target_text.split())
    command, actions = (source, target) if direction is Direction.SCAN else (target, source)
    bad = set(actions) - semantics.ACTION_VOCABULARY
    if bad:
        raise FormatViolation(path, f"unknown action tokens {sorted(bad)}", line_number)
    try:
        derivation = grammar.parse(command)
    except grammar.NotInLanguage as exc:
        raise FormatViolation(path, str(exc), line_number) from exc
    if semantics.interpret(derivation) != actions:
        raise FormatViolation(path, "actions do not match the command's interpretation", line_number)
    return TaskPair(command, actions, derivation)


def _read_side(path: Path, direction: Direction) -> tuple[TaskPair, ...]:
    text = path.read_text(encoding="utf-8")
    return tuple(
        parse_line(line, direction, path, i)
        for i, line in enumerate(text.splitlines(), start=1)
    )


def read_dataset(directory: Path | str) -> Dataset:
    """Exact inverse of write_dataset, with integrity checks."""
    in_dir = Path(directory)
    manifest_path = in_dir / MANIFEST_FILE
    manifest = Manifest.from_json(manifest_path.read_text(encoding="utf-8"), manifest_path)
    train = _read_side(in_dir / TRAIN_FILE, manifest.direction)
    test = _read_side(in_dir / TEST_FILE, manifest.direction)
    for name, side, count, digest in (
        (TRAIN_FILE, train, manifest.train_count, manifest.train_digest),
        (TEST_FILE, test, manifest.test_count, manifest.test_digest),
    ):
        if len(side) != count:
            raise FormatViolation(in_dir / name, f"manifest promises {count} lines, found {len(side)}")
        if _pairs_digest(side) != digest:
            raise FormatViolation(in_dir / name, "content digest does not match manifest")
    spec = SplitSpec.from_dict(manifest.split)
    return Dataset(train, test, spec, manifest)
