"""Exception types shared across the package."""


class RandCantorError(Exception):
    """Base class for all errors raised by randcantor."""


class NeedMoreCode(RandCantorError):
    """A code prefix ran out before decoding reached the requested depth.

    ``required_count`` is a lower bound on the number of digits needed; the
    exact figure depends on digits that were never supplied.
    """

    def __init__(self, required_count, available):
        self.required_count = required_count
        self.available = available
        super().__init__(
            f"code has {available} digits, at least {required_count} needed")


class NeedMoreBits(RandCantorError):
    def __init__(self, column_index, required, available):
        self.column_index = column_index
        self.required = required
        self.available = available
        super().__init__(
            f"column {column_index} has {available} bits, {required} needed")


class DeadEnd(RandCantorError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"tree has a dead end at node {node!r}")


class OutOfRange(RandCantorError, ValueError):
    pass


class UndeterminedError(RandCantorError):
    """An interval comparison could not be decided at the available precision."""

    def __init__(self, node):
        self.node = node
        super().__init__(f"status of node {node!r} is undetermined")


class PrecisionExhausted(RandCantorError):
    def __init__(self, what, width_log2):
        self.what = what
        self.width_log2 = width_log2
        super().__init__(
            f"{what}: enclosure width ~2^{width_log2} exceeds 2^-8; "
            "raise the working precision")


class NegativeInput(RandCantorError, ValueError):
    pass


class ExperimentAborted(RandCantorError):
    def __init__(self, name, failures, trials):
        self.failures = failures
        self.trials = trials
        super().__init__(
            f"experiment {name}: {failures} of {trials} trials failed "
            "(budget is 0.1%)")
