"""ctxbridge: a deterministic simulator for bridging context-aware platforms.

Everything is driven by a logical clock and scripted scenarios; no wall-clock
time or unseeded randomness anywhere, so any run can be replayed byte-for-byte.
"""

__version__ = "0.1.0"
