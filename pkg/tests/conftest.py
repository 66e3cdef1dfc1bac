import pytest

from modpimage.ffield import full_unit_group, gf, trivial_subgroup


@pytest.fixture
def F4():
    return gf(2, 2)


@pytest.fixture
def F8():
    return gf(2, 3)


@pytest.fixture
def F7():
    return gf(7)


@pytest.fixture(params=["trivial", "full"])
def D4(request, F4):
    return trivial_subgroup(F4) if request.param == "trivial" else full_unit_group(F4)


# -- acceptance summary: one line per criterion --------------------------------

_CRITERIA: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed and not rep.skipped):
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "results": {}})
    if hasattr(rep, "wasxfail"):
        status = "xfail"
    elif rep.passed:
        status = "passed"
    elif rep.skipped:
        status = "skipped"
    else:
        status = "failed"
    # a setup/teardown failure overrides the call result
    if entry["results"].get(item.nodeid) in (None, "passed") or status != "passed":
        entry["results"][item.nodeid] = status


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        statuses = list(entry["results"].values())
        ok = all(s == "passed" for s in statuses)
        line = f"criterion {n:2d} {entry['title']}: {'PASS' if ok else 'FAIL'}"
        extra = [f"{s} {nid.split('::')[-1]}" for nid, s in entry["results"].items() if s != "passed"]
        if extra:
            line += " (" + "; ".join(extra) + ")"
        tr.write_line(line)
