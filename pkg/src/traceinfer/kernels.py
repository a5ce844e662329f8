"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set
``TRACEINFER_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("TRACEINFER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.NAME
shortest_path_traces = _impl.shortest_path_traces
# numpy's partition is SIMD-accelerated and beats the compiled quickselect
# (see benchmarks/bench_kernels.py), so this kernel stays on numpy
tree_costs = _pykernels.tree_costs
has_witness = _impl.has_witness
set_count_hist = _impl.set_count_hist


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
