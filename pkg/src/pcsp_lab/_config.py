import os

DEFAULT_CAPACITY = 10**7


def capacity() -> int:
    """Size bound for constructed relations; ``PCSP_LAB_CAPACITY`` overrides."""
    raw = os.environ.get("PCSP_LAB_CAPACITY")
    if raw is None:
        return DEFAULT_CAPACITY
    return int(float(raw))


def numba_disabled() -> bool:
    return os.environ.get("PCSP_LAB_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")
