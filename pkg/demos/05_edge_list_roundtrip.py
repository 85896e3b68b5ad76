"""Generate a graph with the CLI, then reload and embed the edge list from Python.

Shows the file formats end to end.  Everything is written to a temporary
directory.
"""
import json
import tempfile
from pathlib import Path

import numpy as np

from direm.cli import main
from direm.embedding import directed_embed
from direm.io import load_edge_list

with tempfile.TemporaryDirectory() as tmp:
    prefix = str(Path(tmp) / "circle")
    main(["generate", "--shape", "circle", "--n", "120", "--eps", "0.02",
          "--field", "tangential:0.5", "--out", prefix])
    print(Path(prefix + ".edges.csv").read_text().splitlines()[:4])

    A, ids = load_edge_list(prefix + ".edges.csv")
    print("loaded", A.shape, "ids", ids[:3], "...")

    main(["embed", "--input", prefix + ".edges.csv", "--d", "2", "--divergence",
          "--out", prefix + "_emb"])
    R = np.loadtxt(prefix + "_emb.fieldR.csv", delimiter=",", skiprows=1)[:, 1:]
    print("R from file matches Python:", np.allclose(R, directed_embed(A, 2).R))
    cfg = json.loads(Path(prefix + "_emb.config.json").read_text())
    print("spectral gap", cfg["diagnostics"]["spectral_gap"])
