"""
Exception hierarchy for the coherent-error QEC toolkit.

Argument and precondition failures also derive from ValueError so callers
that only know the standard library can still catch them.
"""


class CoherentQECError(Exception):
    """Base class for every error raised by this toolkit"""


class QubitCountError(CoherentQECError, ValueError):
    """Qubit counts, pattern lengths or angle arrays do not match"""


class PauliAlgebraError(CoherentQECError, ValueError):
    """Malformed Pauli string or an operation that needs an involution"""


class CodeConstructionError(CoherentQECError, ValueError):
    """Unsupported code parameters or a code failing its own checks"""


class SyndromeError(CoherentQECError, ValueError):
    """Syndrome does not fit the code it is decoded against"""


class ChannelDomainError(CoherentQECError, ValueError):
    """Rotation angle outside the domain where min-weight decoding is optimal"""


class ChannelNormalizationError(CoherentQECError, ValueError):
    """Term probabilities of a logical channel do not sum to one"""


class CodespaceLeakError(CoherentQECError):
    """A corrected state left the codespace; points at a construction bug"""


class NoiseModelError(CoherentQECError, ValueError):
    """Invalid noise-model parameters or sampling request"""


class FitError(CoherentQECError, ValueError):
    """Curve fit could not be set up or did not converge"""


class ConfigError(CoherentQECError, ValueError):
    """Bad experiment configuration document"""
