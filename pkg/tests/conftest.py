import sys
import pytest

from polycoho.chambers import scan
from polycoho.lengths import LengthVector

# distinct-subset-sum vectors (generic) for each n
GENERIC = {
    4: LengthVector((3, 5, 6, 7)),
    5: LengthVector((6, 9, 11, 12, 13)),
    6: LengthVector((11, 17, 20, 22, 23, 24)),
    7: LengthVector((20, 31, 37, 40, 42, 43, 44)),
}

_chamber_cache = {}


def chamber_reps(n, bound=20):
    """Generic representatives of every nonempty chamber found at this bound."""
    key = (n, bound)
    if key not in _chamber_cache:
        _chamber_cache[key] = [c.representative for c in scan(n, bound, with_betti=False)]
    return _chamber_cache[key]


@pytest.fixture(params=sorted(GENERIC))
def generic_L(request):
    return GENERIC[request.param]


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
