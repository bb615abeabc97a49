# File: src/utils/exporter.py

import json
from datetime import datetime, timezone

import numpy as np
from fpdf import FPDF

from src.config import SPEC_VERSION
from src.utils.helpers import sha256_file


PDF_CREATION_DATE = datetime(2000, 1, 1, tzinfo=timezone.utc)


class PDF(FPDF):
    def header(self):
        pass # No header needed
    def footer(self):
        pass # No footer needed


def export_vectors(vectors: np.ndarray, file_path: str, dimension=None):
    """
    Writes one vector per line, entries separated by spaces.

    Args:
        vectors (np.ndarray): (N, 24) integer vectors.
        file_path (str): Output path.
        dimension: Optional value for the `# dimension N` header.
    """
    with open(file_path, "w", encoding="utf-8") as f:
        if dimension is not None:
            f.write(f"# dimension {dimension}\n")
        for row in np.asarray(vectors):
            f.write(" ".join(str(int(v)) for v in row))
            f.write("\n")


def export_lines(lines, file_path: str):
    with open(file_path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write(f"{line}\n")


def build_manifest(argv: list, seeds: list, inputs: list, outputs: list, results: dict = None) -> dict:
    """
    Run manifest: what was run and digests of what it read and wrote.

    Wall time is left out so reruns produce identical manifests. `results`
    holds deterministic findings of the run (such as a coloring near-miss)
    and is written only when given.
    """
    manifest = {
        "command": list(argv),
        "spec_version": SPEC_VERSION,
        "seeds": [int(s) for s in seeds],
        "inputs": {path: sha256_file(path) for path in inputs},
        "outputs": {path: sha256_file(path) for path in outputs},
    }
    if results:
        manifest["results"] = dict(results)
    return manifest


def manifest_path(output_path: str) -> str:
    return f"{output_path}.manifest.json"


def export_manifest(manifest: dict, output_path: str) -> str:
    path = manifest_path(output_path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def export_to_pdf(text: str, file_path: str, title: str = None):
    """
    Exports a plain-text report to a PDF file.

    Args:
        text (str): The report; lines are kept as they are.
        file_path (str): The path to save the PDF file.
        title (str): Optional heading.
    """
    pdf = PDF()
    # fixed date keeps reruns byte-identical
    pdf.creation_date = PDF_CREATION_DATE
    pdf.add_page()
    # Core fonts only cover Latin-1; reports are plain ASCII tables.
    if title:
        pdf.set_font("Helvetica", style="B", size=12)
        pdf.multi_cell(0, 8, title)
        pdf.ln(2)
    pdf.set_font("Courier", size=8)

    # Use multi_cell to handle line breaks and automatic page breaks.
    pdf.multi_cell(0, 4, text.encode("latin-1", "replace").decode("latin-1"))

    pdf.output(file_path)
