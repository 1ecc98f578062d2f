import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@functools.lru_cache(maxsize=None)
def spectrum(n, g, L, count):
    from ptspectra.core import ModelParams
    from ptspectra.shooting import find_spectrum

    return tuple(find_spectrum(ModelParams(n, g, L), count))


@functools.lru_cache(maxsize=None)
def branch(n):
    from ptspectra.scaling import integrate_branch

    return integrate_branch(n)


@pytest.fixture
def shout(capsys):
    """Print a line straight to the terminal, bypassing capture."""
    def emit(line):
        with capsys.disabled():
            print(line)
    return emit
