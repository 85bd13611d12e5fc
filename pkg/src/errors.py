from typing import Optional


class NscrError(ValueError):
    pass


class DataError(NscrError):
    """Ошибка входных данных. Хранит строку/столбец, если они известны."""

    def __init__(
        self,
        message: str,
        row: Optional[int] = None,
        column: Optional[str] = None,
    ) -> None:
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class SolverError(NscrError):

    def __init__(self, message: str, iteration: Optional[int] = None) -> None:
        self.iteration = iteration
        if iteration is not None:
            message = f"{message} at iteration {iteration}"
        super().__init__(message)


class ConfigError(NscrError):
    pass


class TrialError(NscrError):
    """Ошибка внутри испытания бенчмарка с номером испытания."""

    def __init__(self, trial: int, cause: Exception) -> None:
        self.trial = trial
        super().__init__(f"trial {trial}: {cause}")
