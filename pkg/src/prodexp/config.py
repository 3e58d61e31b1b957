"""Configuration dataclasses: enumeration caps and experiment parameters."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .errors import CapExceeded, ParseError


@dataclass(frozen=True)
class Caps:
    """Upper bounds on exhaustive enumerations.

    Exceeding a cap raises :class:`CapExceeded`; nothing is silently truncated.
    """

    codewords: int = 2**20  # words of a sum code / product code
    coset: int = 2**20  # decomposition cosets, preimage cosets
    subsets: int = 2**20  # subsets of the grid
    distance: int = 2**24  # codewords enumerated for a minimum distance
    cochains: int = 2**24  # cochains enumerated by the sheaf oracle

    def check(self, name: str, what: str, size: int) -> None:
        cap = getattr(self, name)
        if size > cap:
            raise CapExceeded(what, size, cap)

    @classmethod
    def parse(cls, text: str | None) -> "Caps":
        """Parse ``"codewords=2**16,coset=4096"`` style overrides."""
        caps = cls()
        if not text:
            return caps
        names = {f.name for f in fields(cls)}
        updates = {}
        for item in text.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in names:
                raise ParseError(f"bad cap entry {item!r}; known caps: {sorted(names)}")
            updates[key] = _parse_int(value.strip())
        return replace(caps, **updates)


def _parse_int(text: str) -> int:
    base, sep, exp = text.partition("**")
    if not sep:
        base, sep, exp = text.partition("^")
    try:
        value = int(base) ** int(exp) if sep else int(text)
    except ValueError as exc:
        raise ParseError(f"bad integer {text!r}") from exc
    if value <= 0:
        raise ParseError(f"cap must be positive, got {value}")
    return value


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of the random-codes Monte Carlo experiment."""

    n: int = 2
    D: int = 2
    t: int = 16
    dims: tuple[int, ...] = (1, 1)
    samples: int = 1000
    seed: int = 0
    caps: Caps = field(default_factory=Caps)
    scope: str | int = "all"  # "all" or a number of sampled subsets
    threads: int = 1

    def __post_init__(self):
        if len(self.dims) != self.D:
            raise ValueError(f"need {self.D} dimensions, got {len(self.dims)}")
        if any(not 0 <= k <= self.n for k in self.dims):
            raise ValueError(f"dimensions must lie in [0, {self.n}]")
        if self.samples < 1 or self.threads < 1:
            raise ValueError("samples and threads must be positive")
