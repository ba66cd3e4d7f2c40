"""Secrecy outage probability of cooperative NOMA pairs: closed forms and Monte Carlo."""

from ._secnoma import *  # noqa: F401,F403


def reference():
    """Reference geometry and pair (P_BS = 60 dB, P_C = 20 dB)."""
    return NetworkGeometry(), PairConfig()  # noqa: F405


def constants(geometry=None, order=20):
    geometry = geometry or NetworkGeometry()  # noqa: F405
    return QuadratureConstants.build(order, geometry.r_l, geometry.alpha)  # noqa: F405
