
class GroupAnalysisError(Exception):
    def __init__(self, message: str, details: dict = None):
        self.message = message
        self.details = details if details is not None else {}
        super().__init__(self.message)

    def to_dict(self):
        return {"message": self.message, "details": self.details}

class GroupSpecParseError(GroupAnalysisError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})", {"line": line, "column": column})

class GroupOrderExceededError(GroupAnalysisError):
    def __init__(self, limit: int, what: str = "group"):
        super().__init__(f"The {what} exceeds the configured cap of {limit} elements.", {"limit": limit, "what": what})

class InvalidActionError(GroupAnalysisError):
    def __init__(self, message: str, details: dict = None):
        super().__init__(f"Invalid semidirect action: {message}", details)

class InvalidAutomorphismError(GroupAnalysisError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"Automorphism #{index} is invalid: {reason}", {"index": index, "reason": reason})

class NotMinimalNormalError(GroupAnalysisError):
    def __init__(self, order: int, certificate_order: int):
        super().__init__(
            f"Subgroup of order {order} is not a foot: it contains an invariant subgroup of order {certificate_order}.",
            {"order": order, "certificate_order": certificate_order},
        )

class ConsistencyError(GroupAnalysisError):
    def __init__(self, invariant: str, details: dict = None):
        self.invariant = invariant
        super().__init__(f"Internal invariant violated: {invariant}", {"invariant": invariant, **(details if details is not None else {})})

class ConditionDisagreementError(ConsistencyError):
    def __init__(self, verdicts: dict):
        super().__init__("equivalent conditions disagree", {"verdicts": verdicts})

class CharacterTableError(GroupAnalysisError):
    def __init__(self, message: str, details: dict = None):
        super().__init__(f"Character table computation failed: {message}", details)

class RepresentationError(GroupAnalysisError):
    def __init__(self, message: str, details: dict = None):
        super().__init__(f"Representation construction failed: {message}", details)

class CatalogError(GroupAnalysisError):
    def __init__(self, message: str, line: int = None):
        details = {"line": line} if line is not None else {}
        suffix = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{suffix}", details)

INPUT_ERRORS = (
    GroupSpecParseError,
    GroupOrderExceededError,
    InvalidActionError,
    InvalidAutomorphismError,
    CatalogError,
)

class ReportNotFoundError(GroupAnalysisError):
    def __init__(self, report_id: str, kind: str = "Report"):
        super().__init__(f"{kind} with ID '{report_id}' not found.", {"report_id": report_id})

class MCPError(GroupAnalysisError):
    def __init__(self, message: str, details: dict = None):
        super().__init__(message, details)
