"""Shared pytest plumbing: the acceptance scoreboard.

Criterion tests record one ``[criterion NN] PASS|FAIL — detail`` line
each; the terminal-summary hook replays them after the test results so
the scoreboard is visible in any capture mode.
"""

_scoreboard: list[str] = []


def record_criterion_line(line: str) -> None:
    _scoreboard.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _scoreboard:
        terminalreporter.section("acceptance criteria")
        for line in _scoreboard:
            terminalreporter.write_line(line)
