"""
Exception hierarchy shared by all cfx modules.
"""


class CfxError(Exception):
    """Base class for every error raised by cfx."""


# ============================================================
# Input errors
# ============================================================

class ExpressionSyntaxError(CfxError, ValueError):
    def __init__(self, text: str, line: int | None = None, column: int | None = None, detail: str = ""):
        self.text = text
        self.line = line
        self.column = column
        self.detail = detail
        where = f" at line {line}, column {column}" if line is not None else ""
        suffix = f": {detail}" if detail else ""
        super().__init__(f"cannot parse {text!r}{where}{suffix}")


class WellFormednessError(CfxError, ValueError):
    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__(message)


class UnboundPlaceholder(WellFormednessError):
    def __init__(self, name: str):
        super().__init__(name, f"unbound placeholder: {name}")


class DuplicateBinder(WellFormednessError):
    def __init__(self, name: str):
        super().__init__(name, f"binder introduced more than once: {name}")


class CodecError(CfxError, ValueError):
    pass


class ConfigError(CfxError, ValueError):
    pass


# ============================================================
# Precondition errors
# ============================================================

class NotAMu(CfxError, ValueError):
    pass


class NotNullable(CfxError, ValueError):
    pass


class EmptyAlphabet(CfxError, ValueError):
    def __init__(self):
        super().__init__("alphabet must contain at least one symbol")


class NotGuarded(CfxError, ValueError):
    pass


class NotContained(CfxError, ValueError):
    pass


class EmptyLanguage(CfxError, ValueError):
    pass


# ============================================================
# Evaluation errors
# ============================================================

class Diverged(CfxError, RuntimeError):
    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"evaluation diverged after {steps} steps")


class WrongResult(CfxError, RuntimeError):
    def __init__(self, message: str = "coercion evaluated to Wrong"):
        super().__init__(message)


class UnknownPrim(CfxError, KeyError):
    def __init__(self, prim_id: str):
        self.prim_id = prim_id
        super().__init__(f"primitive coercion not registered: {prim_id}")

    def __str__(self) -> str:
        return self.args[0]
