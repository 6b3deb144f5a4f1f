"""Runtime tunables: hierarchy decay, learning rate, implicit-signal table,
review size/threshold, alert threshold, HTTP bind address. Loaded from a JSON
file with ONTOREC_* environment variable overrides.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict


@dataclass(frozen=True)
class Config:
    gamma: float = 0.5  # hierarchy decay per hop
    alpha: float = 0.3  # feedback learning rate
    implicit_signals: Dict[str, float] = field(
        default_factory=lambda: {"opened": 0.2, "readLong": 0.5, "skipped": -0.1}
    )
    k: int = 20  # review size
    theta: float = 0.05  # review score threshold
    tau: float = 0.3  # alert relevance threshold
    bind: str = "127.0.0.1:8742"

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must be in (0, 1]")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if not 0 <= self.theta <= 1:
            raise ValueError("theta must be in [0, 1]")
        if not 0 <= self.tau <= 1:
            raise ValueError("tau must be in [0, 1]")
        if self.k < 0:
            raise ValueError("k must be nonnegative")


_ENV_FIELDS = {
    "ONTOREC_GAMMA": ("gamma", float),
    "ONTOREC_ALPHA": ("alpha", float),
    "ONTOREC_K": ("k", int),
    "ONTOREC_THETA": ("theta", float),
    "ONTOREC_TAU": ("tau", float),
    "ONTOREC_BIND": ("bind", str),
}


def load_config(path=None, env: Dict[str, str] = None) -> Config:
    data = {}
    if path is not None and Path(path).exists():
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    cfg = Config(
        gamma=data.get("gamma", 0.5),
        alpha=data.get("alpha", 0.3),
        implicit_signals=data.get(
            "implicitSignals", {"opened": 0.2, "readLong": 0.5, "skipped": -0.1}
        ),
        k=data.get("k", 20),
        theta=data.get("theta", 0.05),
        tau=data.get("tau", 0.3),
        bind=data.get("bind", "127.0.0.1:8742"),
    )
    env = os.environ if env is None else env
    overrides = {}
    for var, (name, cast) in _ENV_FIELDS.items():
        if var in env:
            overrides[name] = cast(env[var])
    if "ONTOREC_IMPLICIT_SIGNALS" in env:
        overrides["implicit_signals"] = json.loads(env["ONTOREC_IMPLICIT_SIGNALS"])
    return replace(cfg, **overrides) if overrides else cfg


def config_to_json(cfg: Config) -> dict:
    return {
        "gamma": cfg.gamma,
        "alpha": cfg.alpha,
        "implicitSignals": dict(cfg.implicit_signals),
        "k": cfg.k,
        "theta": cfg.theta,
        "tau": cfg.tau,
        "bind": cfg.bind,
    }
