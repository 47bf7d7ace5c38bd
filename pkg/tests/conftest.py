from hypothesis import settings

# numba loads compiled kernels on first call, which trips per-example deadlines
settings.register_profile("locproj", deadline=None, max_examples=50)
settings.load_profile("locproj")


def pytest_terminal_summary(terminalreporter):
    import sys

    lines = []
    for mod in list(sys.modules.values()):
        lines.extend(getattr(mod, "ACCEPTANCE_RESULTS", []) or [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
