"""Select the integer kernel backend: compiled when built, else pure Python."""

try:
    from gelltool import _core as _impl
    BACKEND = "compiled"
except ImportError:  # extension not built
    from gelltool import _fallback as _impl
    BACKEND = "python"

det_int = _impl.det_int
matmul = _impl.matmul
minors = _impl.minors
snf = _impl.snf

__all__ = ["BACKEND", "det_int", "matmul", "minors", "snf"]
