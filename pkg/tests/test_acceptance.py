"""The nine acceptance criteria at exact tolerance, one report line each.

Run as a script for the report alone: ``python tests/test_acceptance.py``.
"""

import pytest

from coxcoh.verify import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, acceptance_lines):
    result = CRITERIA[number]()
    line = result.line()
    print(line)
    acceptance_lines.append(line)
    assert result.passed, result.failures[:3]


if __name__ == "__main__":
    import sys

    results = [CRITERIA[k]() for k in sorted(CRITERIA)]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
