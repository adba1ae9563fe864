import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

#: (criterion id, passed flag, detail) rows filled in by test_acceptance.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((name, passed, detail))
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(
            f"{name}: {'PASS' if passed else 'FAIL'} ({detail})"
        )
