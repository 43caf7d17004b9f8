"""Custom exceptions for the mdp-values toolkit."""


class MdpValuesError(Exception):
    """Base exception for all mdp-values exceptions.

    This is the parent class for all exceptions raised by the toolkit.
    It provides a common type for catching any toolkit-specific error, and an
    ``exit_code`` the command-line interface returns when the error escapes a
    command.
    """

    exit_code = 1

    def __init__(self, message, original_error=None):
        """Initialize the exception.

        Args:
            message: A descriptive error message.
            original_error: The original exception that caused this error, if any.
        """
        self.original_error = original_error
        super().__init__(message)


class ValidationError(MdpValuesError):
    """Raised when an input does not satisfy its invariants.

    This exception is raised in cases such as:
    - An MDP whose transition rows do not sum to 1
    - A target specification with a root inside the unit disk
    - A gadget parameter outside its admissible range
    - A discount factor outside [0, 1)
    """

    exit_code = 2

    def __init__(
        self,
        message,
        parameter=None,
        valid_values=None,
        violations=None,
        original_error=None,
    ):
        """Initialize the validation error.

        Args:
            message: A descriptive error message.
            parameter: The name of the invalid parameter, if applicable.
            valid_values: A description of the valid values, if applicable.
            violations: Itemized violation messages, if any.
            original_error: The original exception that caused this error, if any.
        """
        self.parameter = parameter
        self.valid_values = valid_values
        self.violations = list(violations or [])

        full_message = message
        if parameter and valid_values:
            full_message = f"{message} Valid values for '{parameter}': {valid_values}"
        elif parameter:
            full_message = f"{message} Parameter: '{parameter}'"

        for violation in self.violations:
            full_message += f"\n- {violation}"

        super().__init__(full_message, original_error)


class ParseError(MdpValuesError):
    """Raised when an input document cannot be read or decoded.

    This exception is raised when:
    - The file does not exist or is unreadable
    - The file is not valid JSON
    - The JSON does not match the expected document shape
    - A rational string such as "3/x" cannot be parsed
    """

    exit_code = 3

    def __init__(self, message, source=None, original_error=None):
        """Initialize the parse error.

        Args:
            message: A descriptive error message.
            source: The file or field the error originated from, if known.
            original_error: The original exception that caused this error, if any.
        """
        self.source = source
        if source:
            message = f"{source}: {message}"
        super().__init__(message, original_error)


class ZeroPolynomialError(MdpValuesError, ZeroDivisionError):
    """Raised when an operation is undefined for the zero polynomial."""


class PoleError(MdpValuesError, ZeroDivisionError):
    """Raised when a rational function is evaluated at a root of its denominator."""

    def __init__(self, point, original_error=None):
        """Initialize the pole error.

        Args:
            point: The evaluation point that hit a pole.
            original_error: The original exception that caused this error, if any.
        """
        self.point = point
        super().__init__(f"Rational function has a pole at {point}", original_error)


class RootFindingError(MdpValuesError):
    """Raised when numeric root finding does not reach its residual bound."""


class GadgetSearchExhaustedError(MdpValuesError):
    """Raised when no root-gadget certificate exists within the search bound.

    The search is lexicographic over exponent triples, so raising the bound
    is the only remedy.
    """

    exit_code = 4

    def __init__(self, b, c, bound, original_error=None):
        """Initialize the search exhaustion error.

        Args:
            b: Linear coefficient of the target quadratic.
            c: Constant coefficient of the target quadratic.
            bound: The exponent bound that was searched.
            original_error: The original exception that caused this error, if any.
        """
        self.b = b
        self.c = c
        self.bound = bound
        message = (
            f"Gadget search exhausted for quadratic λ² + ({b})λ + ({c}) "
            f"with bound {bound}; retry with a larger --gadget-bound"
        )
        super().__init__(message, original_error)


class CapExceededError(MdpValuesError):
    """Raised when an enumeration would exceed its configured cap."""

    exit_code = 5

    def __init__(self, count, cap, what="policies", original_error=None):
        """Initialize the cap error.

        Args:
            count: Number of items the enumeration would produce.
            cap: The configured cap.
            what: What is being enumerated, for the message.
            original_error: The original exception that caused this error, if any.
        """
        self.count = count
        self.cap = cap
        self.what = what
        message = f"Enumeration of {count} {what} exceeds the cap of {cap}"
        super().__init__(message, original_error)


class TierMismatchError(MdpValuesError):
    """Raised when exact verification is requested for an input that needs the numeric tier.

    Exact verification covers a degenerate MDP against a single-branch
    specification; anything else must go through numeric verification.
    """
