"""Exception hierarchy.

Physics-domain errors map to CLI exit code 2, numeric degeneracies to 3.
"""


class DiracSusyError(Exception):
    exit_code = 1


class PhysicsDomainError(DiracSusyError):
    exit_code = 2


class NumericDegeneracy(DiracSusyError):
    exit_code = 3


class NonBindingChannel(PhysicsDomainError):
    pass


class NoBoundState(PhysicsDomainError):
    pass


class UnboundState(PhysicsDomainError):
    pass


class DegenerateTransform(NumericDegeneracy):
    pass


class DegenerateKPlus(NumericDegeneracy):
    pass


class NonConvergence(NumericDegeneracy):
    pass


class NoRootBracketed(NumericDegeneracy):
    pass


class DomainError(NumericDegeneracy):
    pass


class IndexOutOfSpectrum(NumericDegeneracy):
    pass


class GridTooSmall(NumericDegeneracy):
    pass


class OriginSingularity(NumericDegeneracy):
    pass


class PoleAtOne(NumericDegeneracy):
    pass


class IrregularResult(NumericDegeneracy):
    pass


class DivergentNorm(NumericDegeneracy):
    pass


class DepthLimit(NumericDegeneracy):
    pass
