class LatticeError(ValueError):
    """Domain error raised by every module (bad input, violated precondition)."""
