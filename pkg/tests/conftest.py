def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[i])
