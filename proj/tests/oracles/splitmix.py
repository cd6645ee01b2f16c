"""SplitMix64 reference generator.

Mirrors the bit-exact generator used by the C++ test fixtures so that both
sides synthesize identical floating-point inputs.
"""

M64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & M64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & M64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
        return z ^ (z >> 31)

    def uniform01(self):
        return (self.next_u64() >> 11) / 9007199254740992.0

    def uniform_pm1(self):
        return 2.0 * self.uniform01() - 1.0

    def gauss(self):
        import math

        u1 = ((self.next_u64() >> 11) + 1) / 9007199254740992.0
        u2 = self.uniform01()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
