"""Exception hierarchy shared by all eiscong modules."""


class EiscongError(Exception):
    """Base class for every error raised by this package."""


class NotSquarefree(EiscongError, ValueError):
    pass


class NarrowClassNumberNotOne(EiscongError, ValueError):
    pass


class ZeroIdeal(EiscongError, ValueError):
    pass


class NotIntegral(EiscongError, ValueError):
    pass


class LevelNotCoprime(EiscongError, ValueError):
    pass


class ZeroModulus(EiscongError, ValueError):
    pass


class ModulusTooLarge(EiscongError, ValueError):
    pass


class NotPrimitive(EiscongError, ValueError):
    pass


class DenominatorNotCoprime(EiscongError, ValueError):
    pass


class ZeroInput(EiscongError, ValueError):
    pass


class RamifiedPrime(EiscongError, ValueError):
    pass


class LevelMismatch(EiscongError, ValueError):
    pass


class UnsupportedArgument(EiscongError, ValueError):
    pass


class OddWeightUnsupported(EiscongError, ValueError):
    pass


class AllConstantTermsZero(EiscongError, ArithmeticError):
    pass


class PreconditionError(EiscongError, ValueError):
    pass


class DataMismatch(EiscongError, ValueError):
    pass


class MissingEigenvalue(EiscongError, KeyError):
    pass


class ParityMismatch(EiscongError, ValueError):
    pass


class ConductorNotCoprime(EiscongError, ValueError):
    pass


class SchemaMismatch(EiscongError, ValueError):
    pass


class DuplicatePrime(EiscongError, ValueError):
    pass


class MalformedValue(EiscongError, ValueError):
    pass


class NetworkError(EiscongError, OSError):
    pass


class TranslationError(EiscongError, ValueError):
    pass


class UsageError(EiscongError, ValueError):
    pass


class DivisionByZero(EiscongError, ZeroDivisionError):
    pass
