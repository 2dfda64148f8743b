class DyncuError(Exception):
    pass


class ModelError(DyncuError):
    """Malformed model input; the CLI maps this to exit code 2."""


class ContractError(DyncuError):
    """An operation was called outside its preconditions."""


class InconsistencyError(DyncuError):
    """A certificate failed independent re-verification (exit code 3)."""
