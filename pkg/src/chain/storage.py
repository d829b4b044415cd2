"""Chain persistence: chain.json plus one Matrix Market file per level."""

import json
from pathlib import Path

import numpy as np

from ..config import Tolerances
from ..core import DirectedLaplacian, read_matrix_market, write_matrix_market
from ..core.mmio import read_dense_matrix_market, write_dense_matrix_market
from ..errors import ChainError
from .chain import ChainLevel, SchurChain

CHAIN_FORMAT_VERSION = 1
CHAIN_FILE = "chain.json"
LEAF_PINV_FILE = "leaf_pinv.mtx"


def save_chain(chain: SchurChain, directory: str | Path) -> Path:
    """
    Write a chain to `directory`.

    Returns:
        Path of the chain.json index file.
    """
    if chain.leaf_pinv is None:
        raise ChainError("chain has no cached leaf pseudoinverse")
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)

    levels = []
    for level in chain.levels:
        name = f"level_{level.index}.mtx"
        write_matrix_market(out / name, level.laplacian.mat)
        levels.append(
            {
                "index": level.index,
                "file": name,
                "support": level.support.tolist(),
                "f_local": level.f_local.tolist(),
            }
        )
    write_dense_matrix_market(out / LEAF_PINV_FILE, chain.leaf_pinv)

    data = {
        "version": CHAIN_FORMAT_VERSION,
        "n": chain.n,
        "alpha": chain.alpha,
        "delta": chain.delta,
        "leaf_size": chain.leaf_size,
        "nnz_budget_factor": chain.nnz_budget_factor,
        "build_seconds": chain.build_seconds,
        "levels": levels,
        "leaf_pinv": LEAF_PINV_FILE,
    }
    index = out / CHAIN_FILE
    index.write_text(json.dumps(data, indent=2))
    return index


def load_chain(directory: str | Path, tolerances: Tolerances | None = None) -> SchurChain:
    """
    Read a chain written by save_chain.

    Raises:
        ChainError: If the index file is missing or has an unknown version.
    """
    src = Path(directory)
    index = src / CHAIN_FILE
    if not index.exists():
        raise ChainError(f"no {CHAIN_FILE} in {src}")
    data = json.loads(index.read_text())
    if data.get("version") != CHAIN_FORMAT_VERSION:
        raise ChainError(f"unsupported chain format version {data.get('version')}")

    chain = SchurChain(
        n=data["n"],
        alpha=data["alpha"],
        delta=data["delta"],
        leaf_size=data["leaf_size"],
        nnz_budget_factor=data.get("nnz_budget_factor", 64.0),
        build_seconds=data.get("build_seconds", 0.0),
    )
    for entry in data["levels"]:
        mat = read_matrix_market(src / entry["file"])
        chain.levels.append(
            ChainLevel(
                index=entry["index"],
                laplacian=DirectedLaplacian(mat, tolerances),
                support=np.asarray(entry["support"], dtype=np.int64),
                f_local=np.asarray(entry["f_local"], dtype=np.int64),
            )
        )
    chain.leaf_pinv = read_dense_matrix_market(src / data["leaf_pinv"])
    return chain
