import json
from pathlib import Path

import pytest

ORACLE_FILE = Path(__file__).parent / "oracles" / "values.json"


def _cx(pair):
    return complex(pair[0], pair[1])


@pytest.fixture(scope="session")
def oracle():
    """Reference values frozen from mpmath (see oracles/generate_oracles.py)."""
    data = json.loads(ORACLE_FILE.read_text())

    def walk(obj):
        if isinstance(obj, list) and len(obj) == 2 and all(isinstance(x, float) for x in obj):
            return _cx(obj)
        if isinstance(obj, list):
            return [walk(x) for x in obj]
        if isinstance(obj, dict):
            return {k: walk(v) for k, v in obj.items()}
        return obj

    return walk(data)


def rel_err(got, want, floor=1e-300):
    return abs(complex(got) - complex(want)) / max(abs(complex(want)), floor)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
