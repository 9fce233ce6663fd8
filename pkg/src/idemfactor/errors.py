"""Exception hierarchy shared by every module of the package."""


class IdemFactorError(Exception):
    """Base class for all errors raised by idemfactor."""


# ring construction and arithmetic
class RingError(IdemFactorError, ValueError):
    pass


class NotPositive(RingError):
    pass


class NotSquareFree(RingError):
    pass


class AlphaZeroModFour(NotSquareFree):
    pass


class RingMismatch(IdemFactorError, ValueError):
    pass


class NotDivisible(IdemFactorError, ArithmeticError):
    pass


class ParseError(IdemFactorError, ValueError):
    pass


# integer number theory
class ModuliNotCoprime(IdemFactorError, ValueError):
    pass


class ZeroHasNoFactorization(IdemFactorError, ValueError):
    pass


class GcdNotOne(IdemFactorError, ValueError):
    pass


class BudgetExhausted(IdemFactorError, RuntimeError):
    """A bounded search ran out of budget; ``partial`` holds whatever was built."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# ideals
class AllGeneratorsZero(IdemFactorError, ValueError):
    pass


class NotInIdeal(IdemFactorError, ValueError):
    pass


class ZeroIdeal(IdemFactorError, ValueError):
    pass


# matrices and certificates
class NotInSL2(IdemFactorError, ValueError):
    pass


class NotIdempotent(IdemFactorError, ValueError):
    pass


class CertificateInvalid(IdemFactorError, ValueError):
    pass


# pipeline
class NotUnimodular(IdemFactorError, ValueError):
    pass


class ChainBroken(IdemFactorError, RuntimeError):
    pass


class PreconditionViolated(IdemFactorError, ValueError):
    pass


class NoUnimodularSolutionInBudget(BudgetExhausted):
    pass


class NotPrincipalWitness(IdemFactorError, ValueError):
    pass


class PipelineInvariantViolated(IdemFactorError, AssertionError):
    """An internal postcondition failed; ``step`` names the construction step."""

    def __init__(self, step, message):
        super().__init__(f"[{step}] {message}")
        self.step = step
