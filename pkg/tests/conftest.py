import pytest

# criterion number -> (title, passed); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def record_criterion():
    def rec(num, title, passed):
        # parametrized criteria pass only when every case passes
        prev = ACCEPTANCE.get(num, (title, True))[1]
        ACCEPTANCE[num] = (title, prev and passed)
    return rec


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[num]
        terminalreporter.write_line("criterion %2d: %s  %s" % (num, "PASS" if ok else "FAIL", title))
