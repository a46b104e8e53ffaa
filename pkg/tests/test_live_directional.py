"""Opt-in directional checks against a live generation endpoint.

Run with, e.g.::

    CULTURESIM_LIVE_BACKEND=chat:http://localhost:8080/v1/chat/completions \
        pytest tests/test_live_directional.py -v -s

Without the environment variable the module is skipped: the trends it
verifies come from real language-model behavior and are not reproducible
with the deterministic mocks.
"""

import os

import pytest

from live_checks import run_directional_battery

LIVE = os.environ.get("CULTURESIM_LIVE_BACKEND")

pytestmark = pytest.mark.skipif(
    not LIVE, reason="needs a live backend; set CULTURESIM_LIVE_BACKEND"
)


def test_directional_battery(tmp_path):
    outcomes = run_directional_battery(LIVE, tmp_path)
    for name, passed in outcomes.items():
        print(f"[live] {name}: {'PASS' if passed else 'FAIL'}")
    failed = [name for name, passed in outcomes.items() if not passed]
    assert not failed, f"directional checks failed: {failed}"
