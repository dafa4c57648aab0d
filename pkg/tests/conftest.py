"""Shared cached constructions: building a MUB family is the slow step."""

from functools import lru_cache

from pimub import build_family, enumerate_orbits, make_field


@lru_cache(maxsize=None)
def field(n):
    return make_field(n)


@lru_cache(maxsize=None)
def family(n):
    return build_family(field(n))


@lru_cache(maxsize=None)
def orbit_table(n):
    return enumerate_orbits(field(n))
