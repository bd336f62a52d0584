"""Exception taxonomy. Every error carries a stable machine-parsable code."""


class SsrepError(Exception):
    code = "E_GENERIC"

    def __init__(self, message="", **data):
        super().__init__(message)
        self.data = data

    def __str__(self):
        base = super().__str__()
        if self.data:
            extra = " ".join(f"{k}={v}" for k, v in sorted(self.data.items()))
            return f"[{self.code}] {base} ({extra})" if base else f"[{self.code}] ({extra})"
        return f"[{self.code}] {base}"


# --- presentation / element level ---

class MalformedSource(SsrepError):
    code = "E_MALFORMED_SOURCE"

class InconsistentPresentation(SsrepError):
    code = "E_INCONSISTENT_PRESENTATION"

class NotAdapted(SsrepError):
    code = "E_NOT_ADAPTED"

class UnknownGenerator(SsrepError):
    code = "E_UNKNOWN_GENERATOR"

class MixedParents(SsrepError):
    code = "E_MIXED_PARENTS"


# --- subgroup / structure level ---

class NotASubgroup(SsrepError):
    code = "E_NOT_A_SUBGROUP"

class NotNilpotent(SsrepError):
    code = "E_NOT_NILPOTENT"

class DepthExceeded(SsrepError):
    code = "E_DEPTH_EXCEEDED"

class NonTerminatingCentralSeries(SsrepError):
    code = "E_CENTRAL_SERIES"

class SearchExhausted(SsrepError):
    code = "E_SEARCH_EXHAUSTED"

class FiniteGroup(SsrepError):
    code = "E_FINITE_GROUP"


# --- characters ---

class InconsistentCharacter(SsrepError):
    code = "E_INCONSISTENT_CHARACTER"

class ZeroValue(SsrepError):
    code = "E_ZERO_VALUE"

class NotInDomain(SsrepError):
    code = "E_NOT_IN_DOMAIN"

class NotNormalized(SsrepError):
    code = "E_NOT_NORMALIZED"

class NotStable(SsrepError):
    code = "E_NOT_STABLE"

class DisagreeOnIntersection(SsrepError):
    code = "E_DISAGREE_ON_INTERSECTION"


# --- induction ---

class TransversalOverflow(SsrepError):
    code = "E_TRANSVERSAL_OVERFLOW"

class InfiniteIndex(SsrepError):
    code = "E_INFINITE_INDEX"

class NotAWeightVector(SsrepError):
    code = "E_NOT_A_WEIGHT_VECTOR"


# --- monomialization ---

class EigenvalueOutsideField(SsrepError):
    code = "E_EIGENVALUE_OUTSIDE_FIELD"

class NotIrreducible(SsrepError):
    code = "E_NOT_IRREDUCIBLE"

class PreconditionUnverified(SsrepError):
    code = "E_PRECONDITION_UNVERIFIED"

class FiniteQuotientSearchFailed(SsrepError):
    code = "E_FINITE_QUOTIENT_SEARCH"

class NoMove(SsrepError):
    code = "E_NO_MOVE"

class OracleIncomplete(SsrepError):
    code = "E_ORACLE_INCOMPLETE"

class QuotientSearchFailed(SsrepError):
    code = "E_QUOTIENT_SEARCH"

class IncompleteEvidence(SsrepError):
    code = "E_INCOMPLETE_EVIDENCE"


# --- oracle ---

class IncompatibleModuli(SsrepError):
    code = "E_INCOMPATIBLE_MODULI"

class CharacterNotWellDefined(SsrepError):
    code = "E_CHARACTER_NOT_WELL_DEFINED"

class UnknownName(SsrepError):
    code = "E_UNKNOWN_NAME"
