import hypothesis.extra.numpy as hnp
import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pseudolorentz.lorentz import ParamTriple, Signature
from pseudolorentz.matcore import random_so

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SIGS = [Signature(m, n) for m, n in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2))]

sigs = st.sampled_from(SIGS)
entries = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)


def params(sig, count=1):
    """Tuple of ``count`` n x m parameters for ``sig``."""
    one = hnp.arrays(np.float64, (sig.n, sig.m), elements=entries)
    return st.tuples(*[one] * count)


def rotations(k):
    return st.integers(min_value=0, max_value=2**32 - 1).map(lambda s: random_so(k, s))


@st.composite
def triples(draw, sig):
    (p,) = draw(params(sig))
    return ParamTriple(p, draw(rotations(sig.n)), draw(rotations(sig.m)))


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    return request.config.acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
