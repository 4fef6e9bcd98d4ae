from typing import Any, Dict


class PulseSimError(Exception):
    """Base error; `code` and `exit_code` drive the CLI error contract."""

    code = "error"
    exit_code = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def as_record(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "context": self.context}


class InputError(PulseSimError):
    code = "input_error"
    exit_code = 1


class ProgramSyntaxError(InputError):
    code = "syntax_error"

    def __init__(self, message: str, line: int, column: int, **context: Any):
        super().__init__(f"line {line}, column {column}: {message}", line=line, column=column, **context)
        self.line = line
        self.column = column


class ProgramCompileError(InputError):
    code = "compile_error"


class UsageError(InputError):
    code = "usage_error"


class NoSolutionError(PulseSimError):
    code = "no_solution"
    exit_code = 2


class PreconditionError(PulseSimError):
    code = "precondition_error"
    exit_code = 3


class ContractError(PreconditionError):
    code = "contract_error"


class NotPseudoPureError(PreconditionError):
    code = "not_pseudo_pure"


class UndefinedMetricError(PreconditionError):
    code = "undefined_metric"


class ProtocolIncompleteError(PreconditionError):
    code = "protocol_incomplete"
