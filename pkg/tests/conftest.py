# -*- coding: utf-8 -*-
import numpy as np
import pytest

from crosscap.lib_surface import GenusConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[5, 6, 7, 8, 9])
def cfg(request):
    """Small genera of both parities."""
    return GenusConfig(request.param)


@pytest.fixture
def cfg7():
    return GenusConfig(7)


@pytest.fixture
def cfg8():
    return GenusConfig(8)


@pytest.fixture
def parset(tmp_path):
    """Write parset text to a file and return its name."""
    def write(text, name='test.parset'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write
