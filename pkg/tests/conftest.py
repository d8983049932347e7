import os

import pytest

from ccpbisim.parser import parse_program

HERE = os.path.dirname(os.path.abspath(__file__))
PROGRAMS = os.path.join(os.path.dirname(HERE), "programs")


def program_path(name):
    return os.path.join(PROGRAMS, name)


def load_program(name):
    with open(program_path(name), encoding="utf-8") as fh:
        return parse_program(fh.read())


@pytest.fixture(scope="session")
def running_example():
    return load_program("running_example.ccp")


@pytest.fixture(scope="session")
def figure_space():
    return load_program("figure_space.ccp")


@pytest.fixture(scope="session")
def examples_basic():
    return load_program("examples_basic.ccp")
