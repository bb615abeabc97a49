# File: src/file_processor.py

import logging

import numpy as np

from src.confgraph.dimacs import read_dimacs
from src.coloring.engine import load_coloring
from src.errors import FileFormatError
from src.hset.codec import decode
from src.hset.selection import HSelection, selection_from_vectors
from src.laminated.sections import section, section_of
from src.leech.engine import LENGTH, MAX_ENTRY

logger = logging.getLogger(__name__)

DIMACS_SUFFIXES = (".col", ".dimacs")


def read_vector_file(file_path: str) -> tuple:
    """
    Reads a vector text file.

    Returns:
        tuple: ((N, 24) int8 array, dimension from the `# dimension N` header or None).
    """
    dimension = None
    rows = []
    with open(file_path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "dimension":
                    dimension = int(parts[1])
                continue
            try:
                row = [int(v) for v in line.split()]
            except ValueError:
                raise FileFormatError(f"{file_path}:{number}: non-integer entry") from None
            if len(row) != LENGTH:
                raise FileFormatError(f"{file_path}:{number}: expected {LENGTH} entries, got {len(row)}")
            if any(abs(v) > MAX_ENTRY for v in row):
                raise FileFormatError(f"{file_path}:{number}: entries must lie in -{MAX_ENTRY}..{MAX_ENTRY}")
            rows.append(row)
    vectors = np.array(rows, dtype=np.int8).reshape(-1, LENGTH)
    return vectors, dimension


def load_hset(file_path: str) -> HSelection:
    """
    Loads an H-selection from a DAT file or a vector text file.

    Text files are matched against M_n, n from the header or else the
    smallest section holding every vector.
    """
    if file_path.lower().endswith(".dat"):
        with open(file_path, "rb") as f:
            return decode(f.read())
    vectors, dimension = read_vector_file(file_path)
    if vectors.shape[0] == 0:
        raise FileFormatError(f"{file_path}: no vectors")
    if dimension is None:
        dimension = int(section_of(vectors).max())
        logger.info("%s: no dimension header, using n=%d", file_path, dimension)
    return selection_from_vectors(vectors, section(dimension), label=f"H_{dimension}[{file_path}]")


def process_file(file_path: str):
    """
    Loads a command input by its extension.

    Returns:
        (Coloring, dimension) for .json, an explicit ConflictGraph for DIMACS
        files and an HSelection for .dat and vector text files.
    """
    lower = file_path.lower()
    if lower.endswith(".json"):
        return load_coloring(file_path)
    elif lower.endswith(DIMACS_SUFFIXES):
        with open(file_path, "r", encoding="utf-8") as f:
            return read_dimacs(f, label=file_path)
    else:
        return load_hset(file_path)
