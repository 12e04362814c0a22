"""End-to-end check of the MPI transport via mpirun subprocesses.

Skipped when mpirun or mpi4py is unavailable.  The same CLI invocation
must produce byte-identical output whether the ranks are simulated
in-process or are real MPI processes.
"""
import shutil
import subprocess
import sys

import pytest

from qsim.cli import main

mpi4py = pytest.importorskip("mpi4py")

pytestmark = pytest.mark.skipif(shutil.which("mpirun") is None,
                                reason="mpirun not on PATH")

# Required on single-CPU container hosts.
MPIRUN = ["mpirun", "--allow-run-as-root", "--oversubscribe"]


def _mpirun(n_ranks, argv, timeout=180):
    cmd = MPIRUN + ["-np", str(n_ranks), sys.executable, "-m", "qsim.cli"] \
        + argv
    return subprocess.run(cmd, capture_output=True, text=True,
                          timeout=timeout)


@pytest.mark.parametrize("n_ranks", [2, 4])
def test_external_matches_simulated(tmp_path, n_ranks):
    p = n_ranks.bit_length() - 1
    circ = tmp_path / "ghz.qc"
    assert main(["ghz", "--n", "5", "--out", str(circ)]) == 0

    sim_out = tmp_path / "sim.csv"
    args = ["run", str(circ), "--output", "state", "--output", "probs:0,4",
            "--output", f"expval:{tmp_path / 'obs.txt'}"]
    (tmp_path / "obs.txt").write_text("1.0 Z 0 Z 4\n0.5 X 0\n")
    assert main(args + ["--ranks-log2", str(p),
                        "--out", str(sim_out)]) == 0

    ext_out = tmp_path / "ext.csv"
    proc = _mpirun(n_ranks, args + ["--transport", "external",
                                    "--ranks-log2", str(p),
                                    "--out", str(ext_out)])
    assert proc.returncode == 0, proc.stderr
    assert ext_out.read_bytes() == sim_out.read_bytes()


def test_rank_count_mismatch_fails_cleanly(tmp_path):
    circ = tmp_path / "bell.qc"
    assert main(["ghz", "--n", "2", "--out", str(circ)]) == 0
    proc = _mpirun(2, ["run", str(circ), "--transport", "external",
                       "--ranks-log2", "2"])
    assert proc.returncode != 0
    assert "does not match" in proc.stderr
