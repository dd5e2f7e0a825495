class SQFError(Exception):
    """
    Raised by the models, samplers and file readers.
    `position` is a (line, column) tuple when the error refers to a place in an input file.
    """
    def __init__(self, message, position=None):
        assert(position is None or isinstance(position, tuple))
        self.position = position
        self.message = message.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
        super().__init__(self.message)

    def as_dict(self):
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'position': list(self.position) if self.position is not None else None,
        }


class ValidationError(SQFError):
    """
    A model, assignment or parameter violates its structural invariants.
    """
    pass


class AssignmentMismatchError(ValidationError):
    """
    An assignment does not cover exactly the labels of the model it is evaluated on.
    """
    pass


class SizeLimitError(ValidationError):
    pass


class EmptyConditionError(SQFError):
    """
    No shot of a sample set satisfies the conditioning qubit value.
    """
    pass


class FormatError(SQFError):
    """
    Raised when reading problem, sample set or schedule files
    """
    def __init__(self, message, position=None):
        super().__init__("format:%s" % message, position)
