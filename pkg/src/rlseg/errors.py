"""Exception hierarchy shared by every rlseg module."""


class RlsegError(ValueError):
    pass


class FormatError(RlsegError):
    """Malformed container or header. ``offset`` is the byte position."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class TruncationError(FormatError):
    pass


class DimensionError(RlsegError):
    pass


class StructureError(RlsegError):
    """A run-length row violates its invariants. ``row`` is 1-based."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class DecodeError(RlsegError):
    """Bitstream decoding failure. ``bit_offset`` counts from the body start."""

    def __init__(self, message, bit_offset=None, row=None):
        parts = []
        if row is not None:
            parts.append(f"row {row}")
        if bit_offset is not None:
            parts.append(f"bit {bit_offset}")
        if parts:
            message = f"{message} ({', '.join(parts)})"
        super().__init__(message)
        self.bit_offset = bit_offset
        self.row = row


class RowLengthError(DecodeError):
    pass


class FramingError(DecodeError):
    pass


class BoundsError(RlsegError):
    pass


class ExhaustedError(RlsegError):
    pass


class InputError(RlsegError):
    pass
