"""
Seedable random streams for the market simulation. Every random number a run consumes comes from one
RandomStream, so a run is reproducible bit for bit from its (config, seed, substream id).

Generator: numpy's PCG64, seeded with SeedSequence(seed, spawn_key=(substream_id,)). Streams that differ only in
their substream id are statistically independent, which is how parallel runs are kept apart.

Draw order of a run:
    init_market: Z_L, Z_U per agent (agent index order), then C_i per agent, then Pareto weights (if used)
    every timestep:
        1. eta(n)
        2. threshold noise, 2 per agent in agent index order, lower before upper (drawn even when delta = 0)
        3. reset draws Z_L then Z_U for each switching agent, ascending index within a cascade batch
        4. reset draws for agents re-anchored around the final price of the step

Block draws (gaussians, uniforms) consume the stream exactly like the same number of consecutive scalar draws.
"""

import numpy as np


class InvalidRangeError(ValueError):
    """A uniform draw was requested on an interval [a, b] with a > b."""


class RandomStream(object):
    def __init__(self, seed, substream_id=0):
        """
        :param seed: non-negative 64-bit integer shared by all runs of an experiment
        :param substream_id: non-negative 64-bit integer, one per run
        """
        if seed < 0 or substream_id < 0:
            raise ValueError(
                "seed and substream_id must be non-negative, got {} and {}".format(
                    seed, substream_id
                )
            )
        self.seed = int(seed)
        self.substream_id = int(substream_id)

        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.substream_id,))
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def gaussian(self):
        """
        :return: a standard normal variate
        :rtype: float
        """
        return float(self._generator.standard_normal())

    def gaussians(self, n):
        """
        :param n: number of draws
        :return: array of n standard normal variates
        """
        return self._generator.standard_normal(n)

    def uniform(self, a, b):
        """
        :return: a uniform variate on [a, b]
        :rtype: float
        """
        _check_range(a, b)
        return float(self._generator.uniform(a, b))

    def uniforms(self, a, b, n):
        _check_range(a, b)
        return self._generator.uniform(a, b, n)

    def paretos(self, exponent, n):
        """
        Classic Pareto variates with scale 1 and tail exponent `exponent`, i.e. values >= 1.
        :param exponent: tail exponent, > 0
        :param n: number of draws
        """
        return self._generator.pareto(exponent, n) + 1.0

    def copy(self):
        """
        A second stream at exactly the same position, which will produce the same draws from here on.
        :rtype: RandomStream
        """
        clone = RandomStream(self.seed, self.substream_id)
        clone._generator.bit_generator.state = self._generator.bit_generator.state
        return clone

    def __repr__(self):
        return "RandomStream(seed={}, substream_id={})".format(
            self.seed, self.substream_id
        )


def _check_range(a, b):
    if a > b:
        raise InvalidRangeError(
            "Invalid uniform range [{}, {}]: lower bound exceeds upper bound".format(a, b)
        )


def gaussian(stream):
    return stream.gaussian()


def uniform(stream, a, b):
    return stream.uniform(a, b)
