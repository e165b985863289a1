"""
database/cover_store.py

Versioned little-endian binary files for tree covers and distance oracles.

    header   magic (8 bytes), version, eps, delta, diameter, scale,
             K, leaf_count, level_count, tree_count
    levels   radii, then per level its hub groups (count, then size + ids)
    trees    q, j, node_count, root_count, then node_vertex, node_level,
             parent, parent_weight and roots

An oracle file is a tree-cover file under its own magic; LCA tables are
rebuilt on load, which is deterministic, so queries answer bit-identically.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path
from typing import List

import numpy as np

from modules.errors import GraphParseError
from modules.oracle.oracle import DistanceOracle, build_oracle
from modules.spc.cover import ShortestPathCover
from modules.treecover.builder import TreeCover
from modules.treecover.tree import CoverTree

logger = logging.getLogger(__name__)

COVER_MAGIC = b"HWDTREE\x00"
ORACLE_MAGIC = b"HWDORCL\x00"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<8sHddddIIII")
_COUNT = struct.Struct("<I")
_TREE = struct.Struct("<IIII")
_INT = np.dtype("<i8")
_FLOAT = np.dtype("<f8")


def _encode(tc: TreeCover, magic: bytes, scale: float) -> bytes:
    leaf_count = tc.trees[0].leaf_count if tc.trees else 0
    parts = [
        _HEADER.pack(
            magic, FORMAT_VERSION, tc.eps, tc.delta, tc.diameter, scale,
            tc.K, leaf_count, len(tc.radii), len(tc.trees),
        ),
        np.asarray(tc.radii, dtype=_FLOAT).tobytes(),
    ]
    for level_groups in tc.groups:
        parts.append(_COUNT.pack(len(level_groups)))
        for group in level_groups:
            parts.append(_COUNT.pack(len(group)))
            parts.append(np.asarray(group, dtype=_INT).tobytes())
    for tree in tc.trees:
        parts.append(_TREE.pack(tree.q, tree.j, tree.node_count, len(tree.roots)))
        for values, dtype in (
            (tree.node_vertex, _INT),
            (tree.node_level, _INT),
            (tree.parent, _INT),
            (tree.parent_weight, _FLOAT),
            (tree.roots, _INT),
        ):
            parts.append(np.asarray(values, dtype=dtype).tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes, path: str):
        self.data = data
        self.path = path
        self.offset = 0

    def unpack(self, layout: struct.Struct) -> tuple:
        if self.offset + layout.size > len(self.data):
            raise GraphParseError("file is truncated", path=self.path)
        values = layout.unpack_from(self.data, self.offset)
        self.offset += layout.size
        return values

    def array(self, dtype: np.dtype, count: int) -> np.ndarray:
        size = dtype.itemsize * count
        if self.offset + size > len(self.data):
            raise GraphParseError("file is truncated", path=self.path)
        values = np.frombuffer(self.data, dtype=dtype, count=count, offset=self.offset)
        self.offset += size
        return values.astype(dtype.newbyteorder("="))


def _decode(data: bytes, magic: bytes, path: str) -> tuple[TreeCover, float]:
    reader = _Reader(data, path)
    found, version, eps, delta, diameter, scale, K, leaf_count, level_count, tree_count = reader.unpack(_HEADER)
    if found != magic:
        raise GraphParseError(f"not a {'distance oracle' if magic == ORACLE_MAGIC else 'tree cover'} file", path=path)
    if version != FORMAT_VERSION:
        raise GraphParseError(f"unsupported format version {version}", path=path)

    radii = [float(r) for r in reader.array(_FLOAT, level_count)]
    groups: List[List[np.ndarray]] = []
    for _ in range(level_count):
        (count,) = reader.unpack(_COUNT)
        level_groups = []
        for _ in range(count):
            (size,) = reader.unpack(_COUNT)
            level_groups.append(reader.array(_INT, size))
        groups.append(level_groups)

    trees = []
    for _ in range(tree_count):
        q, j, node_count, root_count = reader.unpack(_TREE)
        trees.append(
            CoverTree(
                q=q,
                j=j,
                leaf_count=leaf_count,
                node_vertex=reader.array(_INT, node_count),
                node_level=reader.array(_INT, node_count),
                parent=reader.array(_INT, node_count),
                parent_weight=reader.array(_FLOAT, node_count),
                roots=reader.array(_INT, root_count),
            )
        )
    if reader.offset != len(data):
        raise GraphParseError(f"{len(data) - reader.offset} trailing bytes", path=path)

    spcs = [
        ShortestPathCover(r=r, eps=eps, hubs=np.concatenate(g) if g else np.zeros(0, dtype=np.int64))
        for r, g in zip(radii, groups)
    ]
    return TreeCover(eps, delta, K, radii, spcs, groups, trees, diameter), scale


def save_tree_cover(tc: TreeCover, path: str | Path, scale: float = 1.0) -> None:
    Path(path).write_bytes(_encode(tc, COVER_MAGIC, scale))
    logger.info("saved tree cover with %d trees to %s", tc.tree_count, path)


def load_tree_cover(path: str | Path) -> tuple[TreeCover, float]:
    """Returns (tree cover, scale factor it was built under)."""
    return _decode(Path(path).read_bytes(), COVER_MAGIC, str(path))


def save_oracle(oracle: DistanceOracle, path: str | Path) -> None:
    if oracle.tree_cover is None:
        raise ValueError("oracle was built without its tree cover; nothing to persist")
    Path(path).write_bytes(_encode(oracle.tree_cover, ORACLE_MAGIC, oracle.scale))
    logger.info("saved oracle with %d trees to %s", oracle.tree_count, path)


def load_oracle(path: str | Path, threads: int = 1) -> DistanceOracle:
    tc, scale = _decode(Path(path).read_bytes(), ORACLE_MAGIC, str(path))
    return build_oracle(tc, scale=scale, threads=threads)
