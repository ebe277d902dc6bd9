"""
Driving the command line tool
=============================

Everything above is also reachable from ``wydskew``.  This script writes two
matrix files to a temporary directory and calls the entry point in-process.
"""

import tempfile
from pathlib import Path

import numpy as np

from wydskew.cli import main
from wydskew.serialization import write_matrix_file

tmp = Path(tempfile.mkdtemp())
write_matrix_file(tmp / "rho.json", np.diag([0.75, 0.25]), "state")
write_matrix_file(tmp / "sx.json", np.array([[0.0, 1.0], [1.0, 0.0]]), "observable")
print((tmp / "rho.json").read_text())

commands = [
    ["eval", "--generator", "exotic", "--what", "h,sharp,f", "--t", "0.5,2", "--format", "csv"],
    ["certify", "--function", "square", "--order", "2", "--trials", "10", "--seed", "1"],
    ["skewinfo", str(tmp / "rho.json"), str(tmp / "sx.json"), "--generator", "wy",
     "--method", "all", "--format", "csv"],
    ["bridge", str(tmp / "rho.json"), str(tmp / "sx.json"), "--alpha", "0", "--format", "csv"],
]
for argv in commands:
    print("$ wydskew", " ".join(argv))
    code = main(argv)
    print(f"[exit {code}]\n")
