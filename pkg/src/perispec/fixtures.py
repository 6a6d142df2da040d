"""Reusable inputs: the embedding counterexample and textbook descriptors."""
import json
from pathlib import Path

from .recovery import embedding_fixture

# name -> (k, seq)
DESCRIPTORS = {
    "usual_product": (2, (1, 2)),
    "jordan_semi_triple": (2, (2, 1, 2)),
    "triple_product": (3, (1, 2, 3)),
    "semi_jordan_k3": (3, (2, 3, 3, 1, 3, 3, 2)),
    "quasi_semi_jordan_k3": (3, (2, 3, 3, 1, 3, 3, 2, 2, 3, 3, 3, 2)),
    "b2_a_b1": (2, (2, 2, 1, 2)),
    "non_quasi_k3": (3, (1, 2, 3, 2, 2)),
}


def write_fixtures(out_dir):
    """Write every fixture as JSON under ``out_dir``; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    path = out / "embedding_m2_m3.json"
    path.write_text(json.dumps(embedding_fixture().to_json(), indent=1) + "\n")
    written.append(path)
    for name, (k, seq) in DESCRIPTORS.items():
        path = out / f"descriptor_{name}.json"
        path.write_text(json.dumps({"k": k, "seq": list(seq)}) + "\n")
        written.append(path)
    return written
