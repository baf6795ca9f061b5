"""Automata and channel tables shipped with the package.

example1: the three-state worked example (value of "baa" is 1/4).
amp3: a three-state mixer with a non-accepting start, used to exercise the
    amplifier identities.
d_34 / d_25: coin-race gadgets at x = 3/4 and x = 2/5, both with y = 1/2.
family3: the freeze/reset family member built on amp3 with separation 1.
bsc11: binary symmetric channel table with crossover 0.11.
"""

from __future__ import annotations

from importlib import resources

from .formats import parse_dmc, parse_pfa
from .pfa import Pfa


def fixture_text(name: str) -> str:
    return resources.files("fsmcap").joinpath("fixtures", name).read_text()


def load_fixture_pfa(name: str) -> Pfa:
    return parse_pfa(fixture_text(name), source=f"fixtures/{name}")


def example1() -> Pfa:
    return load_fixture_pfa("example1.pfa")


def amp3() -> Pfa:
    return load_fixture_pfa("amp3.pfa")


def d_34() -> Pfa:
    return load_fixture_pfa("d_34.pfa")


def d_25() -> Pfa:
    return load_fixture_pfa("d_25.pfa")


def family3() -> Pfa:
    return load_fixture_pfa("family3.pfa")


def bsc11_rows():
    return parse_dmc(fixture_text("bsc11.dmc"), source="fixtures/bsc11.dmc")
