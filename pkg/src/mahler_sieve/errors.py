class ResourceError(RuntimeError):
    """A configured depth, exponent or refinement cap would be exceeded."""


class HorizonExceeded(RuntimeError):
    """No impermissible depth was found within the requested horizon."""

    def __init__(self, x, max_depth):
        super().__init__(f"x={x} stays permissible through depth {max_depth}")
        self.x = x
        self.max_depth = max_depth


class CertificationError(AssertionError):
    """A Tijdeman run failed exact re-certification."""

    def __init__(self, index, reason):
        super().__init__(f"certification failed at index {index}: {reason}")
        self.index = index
        self.reason = reason
