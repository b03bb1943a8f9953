import subprocess
import sys
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
TOY_RULESET = DATA_DIR / "toy_ruleset.json"


def _generate(out: Path, seed: int) -> None:
    # The harness consumes the generator only through its CLI + CSV surface.
    subprocess.run(
        [
            sys.executable,
            "-m",
            "framesynth",
            "generate",
            str(TOY_RULESET),
            "--seed",
            str(seed),
            "--out",
            str(out),
        ],
        check=True,
        capture_output=True,
    )


@pytest.fixture(scope="session")
def toy_pair(tmp_path_factory):
    """Two independent generations of the separable toy ruleset."""
    base = tmp_path_factory.mktemp("toy")
    train = base / "toy_seed11.csv"
    test = base / "toy_seed22.csv"
    _generate(train, seed=11)
    _generate(test, seed=22)
    return train, test
