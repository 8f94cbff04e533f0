import json

import numpy as np
import pytest

from funceq.core.exact_family import build_spec
from funceq.models.equation import EquationSpec, ExactFamily


@pytest.fixture
def paradise_fast():
    """paradise(0.1, 0.2): inside the guaranteed-contraction region."""
    return EquationSpec.paradise(0.1, 0.2)


@pytest.fixture
def paradise_slow():
    """paradise(0.1, 0.5): c = 1.2, converges empirically."""
    return EquationSpec.paradise(0.1, 0.5)


@pytest.fixture
def exact_quartic():
    return build_spec(ExactFamily(alpha=0.3, beta=0.7, m=4))


@pytest.fixture
def sine_init():
    def f(x):
        return np.sin(np.pi * np.asarray(x) / 2.0)

    return f


@pytest.fixture
def write_spec(tmp_path):
    """Write a spec document (dict or raw text) and return its path as a string."""

    def write(content, name="spec.json"):
        path = tmp_path / name
        text = content if isinstance(content, str) else json.dumps(content)
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
