"""Shared test helpers."""

import numpy as np


class ScriptedStream:
    """Stream double that feeds predetermined draws to the model.

    Each draw kind pops from its own queue, so tests can pin shocks,
    threshold offsets, and initial positions independently.  Running a queue
    dry raises IndexError, which doubles as a draw-count check.
    """

    def __init__(self, normals=(), uniforms=(), signs=()):
        self.normals = list(normals)
        self.uniforms = list(uniforms)
        self.signs = list(signs)

    def standard_normal(self):
        return self.normals.pop(0)

    def uniform(self, lo, hi):
        return self.uniforms.pop(0)

    def sign(self):
        return self.signs.pop(0)


def timeseries_equal(a, b):
    """Bitwise equality of two TimeSeries, column by column."""
    return (
        np.array_equal(a.step, b.step)
        and np.array_equal(a.eta, b.eta)
        and np.array_equal(a.price, b.price)
        and np.array_equal(a.emh_price, b.emh_price)
        and np.array_equal(a.sentiment, b.sentiment)
        and np.array_equal(a.n_switches, b.n_switches)
    )
