"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateFibreError(DomainError):
    """Some evaluated coefficient vanishes."""


class DegenerateConicError(DomainError):
    """A conic with a zero coefficient."""


class FamilySyntaxError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg


class FamilyError(ValueError):
    """A well-formed family description that breaks a structural rule."""


class ResidueError(ValueError):
    """Residue data inconsistent with the family."""


class CensusError(ValueError):
    """Invalid census request."""


class InputError(ValueError):
    """Invalid mean-value input."""
