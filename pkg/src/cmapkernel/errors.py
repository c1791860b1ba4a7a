"""Exception types shared by every module."""


class CMapKernelError(Exception):
    """Base class for all library errors."""


class ShapeError(CMapKernelError, ValueError):
    """Invalid abelian shape or a mismatch between shapes."""


class DivisibilityViolation(CMapKernelError, ValueError):
    def __init__(self, i, j, required, value):
        self.i = i
        self.j = j
        self.required = required
        self.value = value
        super().__init__(
            f"entry ({i}, {j}) = {value} is not divisible by {required}"
        )


class GuardExceeded(CMapKernelError):
    def __init__(self, what, count, guard):
        self.what = what
        self.count = count
        self.guard = guard
        super().__init__(f"{what}: {count} exceeds guard {guard}")


class NotASubgroup(CMapKernelError, ValueError):
    pass


class InternalInconsistency(CMapKernelError, AssertionError):
    """A computed result contradicts a proven identity; always a bug."""


class NotAGroup(CMapKernelError, ValueError):
    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"group axiom '{axiom}' fails at {witness}")


class NotNormal(CMapKernelError, ValueError):
    pass


class NotAbelian(CMapKernelError, ValueError):
    pass


class NotPPower(CMapKernelError, ValueError):
    pass


class NotClass2(CMapKernelError, ValueError):
    def __init__(self, nilpotency_class):
        self.nilpotency_class = nilpotency_class
        super().__init__(f"group has nilpotency class {nilpotency_class}, not 2")


class InvalidRecipe(CMapKernelError, ValueError):
    pass


class ParseError(CMapKernelError, ValueError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
