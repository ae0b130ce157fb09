"""Exception types raised across the package."""


class ShapeError(ValueError):
    """Two arrays that must align have different shapes."""


class UndefinedMetricError(ValueError):
    """A metric was requested on input where it has no defined value."""


class EnumerationBoundError(ValueError):
    """An exhaustive enumeration was requested for too large an input."""


class CSVFormatError(ValueError):
    """A CSV cell could not be parsed.

    ``row`` and ``column`` are 1-based positions in the file as written,
    so a header line counts as row 1.
    """

    def __init__(self, message: str, row: int, column: int):
        super().__init__(f"row {row}, column {column}: {message}")
        self.row = row
        self.column = column
