"""Exception types shared across the package."""


class StructureError(ValueError):
    """Malformed input: wrong table shapes, indices out of range, bad labels."""


class ParseError(StructureError):
    def __init__(self, msg, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            msg = f"line {lineno}: {msg}"
        super().__init__(msg)


class AxiomError(ValueError):
    """An input structure failed the verification a construction requires.

    The failing report is kept on ``.report`` so callers can print witnesses.
    """

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class PoleError(ValueError):
    """Evaluation of a meromorphic loop at (or too near) one of its poles."""


class PreconditionError(ValueError):
    """Loop inputs outside the region where the reversal actions are defined."""
