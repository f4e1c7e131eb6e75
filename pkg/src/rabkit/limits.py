"""Safety caps for desk-scale enumeration.

Defaults can be overridden with the ``RABKIT_LIMITS`` environment variable,
e.g. ``RABKIT_LIMITS="radius=7,elements=20000"``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


class LimitExceeded(RuntimeError):
    """Raised when a request would exceed a configured safety cap."""


@dataclass(frozen=True)
class Limits:
    radius: int = 6
    q: int = 6
    rank: int = 5
    elements: int = 10_000
    galleries: int = 10_000
    closure: int = 5_000

    @classmethod
    def from_env(cls, env: str | None = None) -> "Limits":
        raw = os.environ.get("RABKIT_LIMITS", "") if env is None else env
        limits = cls()
        if not raw.strip():
            return limits
        known = {f.name for f in fields(cls)}
        updates = {}
        for item in raw.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ValueError(
                    f"RABKIT_LIMITS: cannot parse {item!r}; expected key=value with key in {sorted(known)}"
                )
            updates[key] = int(value)
        return replace(limits, **updates)


_current: Limits | None = None


def get_limits() -> Limits:
    global _current
    if _current is None:
        _current = Limits.from_env()
    return _current


def set_limits(limits: Limits | None) -> None:
    """Install ``limits`` process-wide (``None`` re-reads the environment)."""
    global _current
    _current = limits


def check(name: str, value: int) -> None:
    cap = getattr(get_limits(), name)
    if value > cap:
        raise LimitExceeded(f"{name}={value} exceeds safety cap {cap} (override via RABKIT_LIMITS)")


def check_depth(value: int) -> None:
    """Evaluation depth of a lazy map may reach twice the radius cap, plus two."""
    cap = 2 * get_limits().radius + 2
    if value > cap:
        raise LimitExceeded(
            f"evaluation depth {value} exceeds safety cap {cap} (twice radius + 2; override via RABKIT_LIMITS)"
        )
