"""Event-loop backend selection: compiled kernel if importable, else pure Python."""
from eponlab.sim import _qnet_py

try:
    from eponlab.sim import _qnet as _compiled
except ImportError:  # extension not built
    _compiled = None

COMPILED = _compiled is not None
BACKEND = "cython" if COMPILED else "python"

run_network_py = _qnet_py.run_network
run_network = _compiled.run_network if COMPILED else run_network_py
