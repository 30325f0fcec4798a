import os
import subprocess
import sys

import pytest

os.environ.setdefault("MPLBACKEND", "Agg")

import matplotlib.pyplot as plt  # noqa: E402

# The simulation package is exercised strictly as an external program;
# these tests only ever touch the files it writes.
GROUPFLOW = [sys.executable, "-c",
             "import sys; from groupflow.cli import main; sys.exit(main(sys.argv[1:]))"]


def run_groupflow(args):
    proc = subprocess.run(GROUPFLOW + [str(a) for a in args],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(autouse=True)
def _close_figures():
    yield
    plt.close("all")


@pytest.fixture(scope="session")
def sim_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("sim")
    run_groupflow(["simulate", "--n0", 40, "--n1", 20,
                   "--p-swap", 0.7, "--p-assort-0", 0.9, "--p-assort-1", 0.8,
                   "--alpha-0", 0.25, "--alpha-1", 0.5,
                   "--sweeps", 60, "--sample-every", 2, "--replicas", 2,
                   "--seed", 5, "--out", out])
    return out


@pytest.fixture(scope="session")
def phase_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("phase")
    run_groupflow(["phase", "--b", 0.5, "--c", 2, "--ps", 1.0,
                   "--resolution", 41, "--boundaries", "--out", out])
    return out


@pytest.fixture(scope="session")
def sb_phase_dir(tmp_path_factory):
    # ps below the critical swap probability for b=0.5, c=2: every cell
    # classifies the same way, which the figure must survive.
    out = tmp_path_factory.mktemp("phase_sb")
    run_groupflow(["phase", "--b", 0.5, "--c", 2, "--ps", 0.2,
                   "--resolution", 21, "--out", out])
    return out


@pytest.fixture(scope="session")
def sweep_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("psstar")
    run_groupflow(["psstar", "--b", 0.3, "--b", 0.5, "--b", 0.7,
                   "--c", 2, "--out", out])
    run_groupflow(["psstar", "--b", 1.0, "--c", 1.0, "--out", out])
    return out
