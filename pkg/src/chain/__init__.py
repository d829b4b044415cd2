"""Schur complement chains: construction, validation and storage."""

from .chain import ChainBuilder, ChainConfig, ChainLevel, SchurChain, build_chain, symmetric_boost
from .storage import load_chain, save_chain
from .validate import ChainReport, LevelReport, validate_chain

__all__ = [
    "ChainBuilder",
    "ChainConfig",
    "ChainLevel",
    "ChainReport",
    "LevelReport",
    "SchurChain",
    "build_chain",
    "load_chain",
    "save_chain",
    "symmetric_boost",
    "validate_chain",
]
