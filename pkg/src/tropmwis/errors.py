"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Malformed or out-of-range input."""


class SizeCapExceeded(InvalidInput):
    """An exact oracle was asked to run on an instance above its size cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: instance size {size} exceeds cap {cap} "
                         f"(raise it via TROPIC_MWIS_CAPS)")
        self.what = what
        self.size = size
        self.cap = cap


class DecompositionError(InvalidInput):
    """A tree decomposition or treedepth forest violates a defining condition."""

    def __init__(self, condition, witness, message):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


class CircuitError(InvalidInput):
    """Structural problem in a tropical circuit, naming the offending gate."""

    def __init__(self, gate, message):
        super().__init__(f"gate {gate}: {message}")
        self.gate = gate


class GenerationError(RuntimeError):
    """A randomized generator could not produce a certified instance."""
