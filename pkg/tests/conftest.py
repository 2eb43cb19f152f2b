"""Shared pytest wiring: surface the acceptance-gate verdict lines.

The gate tests record one PASS/FAIL line apiece in GATE_LINES; printing
them from the terminal-summary hook keeps them out of per-test capture
so they appear exactly once at the end of every run, teed logs included.
"""

GATE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if GATE_LINES:
        terminalreporter.section("acceptance gate")
        for line in GATE_LINES:
            terminalreporter.write_line(line)
