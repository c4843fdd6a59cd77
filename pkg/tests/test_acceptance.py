"""Acceptance battery: the twelve headline checks at their stated sizes and
tolerances. Each test emits a single pass/fail line with the measured
figures; the underlying implementations live in ssh_dispersive.verify so the
CLI ``verify`` command runs the identical code.
"""
import sys

import pytest

from ssh_dispersive import verify

_CRITERIA = [
    ("01", verify.check_edge_state_kernel),
    ("02", verify.check_symmetries),
    ("03", verify.check_dispersion_identities),
    ("04", verify.check_q_star),
    ("05", verify.check_closed_forms),
    ("06", verify.check_resolvent_oracle),
    ("07", verify.check_propagator_oracle),
    ("08", verify.check_type_terms),
    ("09", verify.check_decay_envelopes),
    ("10", verify.check_prefactor_boundedness),
    ("11", verify.check_arc_bounds),
    ("12", verify.check_no_embedded_eigenvalues),
]


@pytest.mark.parametrize("num,check", _CRITERIA,
                         ids=[f"{n}-{c.__name__.removeprefix('check_')}"
                              for n, c in _CRITERIA])
def test_criterion(num, check):
    result = check("full")
    line = (f"{'PASS' if result.passed else 'FAIL'} criterion {num} "
            f"{result.name} [{result.seconds:.1f}s] {result.detail}")
    print(line, file=sys.stderr)
    assert result.passed, line
