import io
from pathlib import Path

import pytest
from hypothesis import settings

from scripts.optical_activity import main

GOLDEN_DIR = Path(__file__).resolve().parent / 'tests' / 'golden'

settings.register_profile('optical_activity', max_examples=100, deadline=None, derandomize=True)
settings.load_profile('optical_activity')


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def run_cli():
    """Run the CLI in-process; returns (exit_code, stdout_text)."""
    def _run(*argv: str):
        stream = io.StringIO()
        code = main(list(argv), stream=stream)
        return code, stream.getvalue()
    return _run
