"""Exception types shared across the package."""


class ContractError(ValueError):
    """An argument violates a documented precondition."""


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the configured subset budget."""

    def __init__(self, needed, budget, hint="use sample_submatrix_spectra instead"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{needed} subsets exceeds budget {budget}; {hint}")


class RootFindingError(ArithmeticError):
    """Root isolation failed to bracket a root of a real-rooted polynomial."""

    def __init__(self, message, coeffs):
        self.coeffs = tuple(float(c) for c in coeffs)
        super().__init__(f"{message}; coefficients (ascending) = {self.coeffs}")


class MatrixParseError(ValueError):
    """Malformed matrix text file."""

    def __init__(self, message, line, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
