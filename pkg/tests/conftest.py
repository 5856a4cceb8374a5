import math

from tdho.freq_profile import (
    Constant, DeltaPulse, ExpDecay, PowerLaw, SechSquared,
)
from tdho.evolve import GaussianState

# Frozen desk-scale suite: one representative per analytic family plus the
# impulsive case.  Constants are tuned so every window below is caustic-free
# and every method stays inside its accuracy envelope.
SUITE = [
    Constant(0.8),
    ExpDecay(1.0, 1.0),
    PowerLaw(0.8, 1.0, 1.0),
    DeltaPulse(0.6, 0.5),
    SechSquared(1.0, 1.0, 0.5),
]
WINDOW = (0.0, 1.0)
SEED = 20260816

# sigma^2 = 1/2: the stationary ground packet of the unit oscillator.
PACKET = GaussianState(0.0, 0.0, math.sqrt(0.5))


# ---------------------------------------------------------------------------
# acceptance-criterion reporting: each acceptance test records its verdict
# here before asserting, and the terminal summary prints one line per
# criterion so a failing run still shows every measured magnitude.

_CRITERIA: dict[int, tuple[str, bool, str]] = {}


def record_criterion(num: int, title: str, passed: bool, detail: str = "") -> None:
    _CRITERIA[num] = (title, bool(passed), detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, passed, detail = _CRITERIA[num]
        verdict = "PASS" if passed else "FAIL"
        line = f"criterion {num:02d} {verdict}  {title}"
        if detail:
            line += f"  [{detail}]"
        tr.write_line(line, green=passed, red=not passed)
