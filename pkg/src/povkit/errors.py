"""Error taxonomy shared by all povkit modules.

Every error carries a stable ``exit_code`` so CLI failures are
machine-distinguishable; ``povkit --help`` prints the full table.
"""

from __future__ import annotations


class PovkitError(Exception):
    """Base class for all povkit errors."""

    exit_code = 1


# -- panel ingestion / merge -------------------------------------------------

class MissingColumn(PovkitError):
    exit_code = 10

    def __init__(self, column: str, path: str = ""):
        self.column = column
        self.path = path
        super().__init__(f"missing column {column!r}" + (f" in {path}" if path else ""))


class BadNumeric(PovkitError):
    exit_code = 11

    def __init__(self, row: int, column: str, value: str = ""):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r}")


class RangeViolation(PovkitError):
    exit_code = 12

    def __init__(self, row: int, column: str, value: float | None = None, bounds: str = ""):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"row {row}, column {column!r}: value {value!r} outside {bounds or 'allowed range'}"
        )


class DuplicateKey(PovkitError):
    exit_code = 13

    def __init__(self, country: str, year: int | None = None, row: int | None = None):
        self.country = country
        self.year = year
        self.row = row
        where = f" (row {row})" if row is not None else ""
        super().__init__(f"duplicate key ({country}, {year}){where}")


class ConflictingValue(PovkitError):
    exit_code = 14

    def __init__(self, country: str, year: int | None, field: str, values: tuple = ()):
        self.country = country
        self.year = year
        self.field = field
        self.values = values
        super().__init__(
            f"conflicting values for ({country}, {year}).{field}: {values!r}"
        )


class UnknownIncomeLevel(PovkitError):
    exit_code = 15

    def __init__(self, iso3: str):
        self.iso3 = iso3
        super().__init__(f"no income level known for {iso3}")


class EmptyVariable(PovkitError):
    exit_code = 16

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name!r} has no observed values")


# -- distribution measures ---------------------------------------------------

class NonpositiveLine(PovkitError):
    exit_code = 20

    def __init__(self, z: float):
        self.z = z
        super().__init__(f"poverty line must be positive, got {z!r}")


class ZeroIncomeAmongPoor(PovkitError):
    exit_code = 21

    def __init__(self):
        super().__init__("Watts index undefined: zero income among the poor")


class ZeroMean(PovkitError):
    exit_code = 22

    def __init__(self):
        super().__init__("sample mean must be positive")


# -- index construction ------------------------------------------------------

class DegenerateColumn(PovkitError):
    exit_code = 30

    def __init__(self, name: str = ""):
        self.name = name
        super().__init__(f"column {name!r} is constant; cannot normalize or correlate")


class ConvergenceFailure(PovkitError):
    exit_code = 31

    def __init__(self, detail: str = ""):
        super().__init__(f"eigensolver failed to converge{': ' + detail if detail else ''}")


class InsufficientRows(PovkitError):
    exit_code = 32

    def __init__(self, n: int, need: int):
        self.n = n
        self.need = need
        super().__init__(f"need at least {need} complete rows, have {n}")


# -- panel regression ----------------------------------------------------------

class RankDeficient(PovkitError):
    exit_code = 40

    def __init__(self, columns: list[str]):
        self.columns = columns
        super().__init__(f"design matrix rank deficient; offending columns: {columns}")


class TooFewClusters(PovkitError):
    exit_code = 41

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"need at least 2 clusters, have {n}")


class NoObservations(PovkitError):
    exit_code = 42

    def __init__(self, detail: str = ""):
        super().__init__(f"no usable observations{': ' + detail if detail else ''}")


class MissingModeratorValue(PovkitError):
    exit_code = 43

    def __init__(self, field: str):
        self.field = field
        super().__init__(f"no value supplied for interaction partner {field!r}")


# -- forecasting ---------------------------------------------------------------

class MissingCoefficient(PovkitError):
    exit_code = 50

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"model has no coefficient named {name!r}")


class NoBaseValue(PovkitError):
    exit_code = 51

    def __init__(self, country: str, field: str):
        self.country = country
        self.field = field
        super().__init__(f"{country}: no base value for {field!r}")


class MissingPopulation(PovkitError):
    exit_code = 52

    def __init__(self, country: str):
        self.country = country
        super().__init__(f"no population available for {country}")


# -- reporting -----------------------------------------------------------------

class LayoutMismatch(PovkitError):
    exit_code = 60

    def __init__(self, layout: str, detail: str = ""):
        self.layout = layout
        super().__init__(f"result does not fit layout {layout!r}{': ' + detail if detail else ''}")


def exit_code_table() -> list[tuple[int, str]]:
    """(exit_code, error name) pairs for every registered error, sorted by code."""
    rows = []
    stack = [PovkitError]
    while stack:
        cls = stack.pop()
        stack.extend(cls.__subclasses__())
        if cls is not PovkitError:
            rows.append((cls.exit_code, cls.__name__))
    return sorted(rows)
