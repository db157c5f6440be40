class ResourceCapError(RuntimeError):
    """A configurable resource cap (atom count, slot count) was exceeded."""
