"""Logless dynamic reconfiguration for Raft-style replication.

Python surface over the C++ core: the protocol state machine, the safety
invariant checkers, the bounded explicit-state explorer, the deterministic
network simulator, and the degraded-replication availability experiment.
"""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core as _impl  # noqa: F401
except ImportError:  # built-tree layout: the extension sits next to the package
    from _core import *  # noqa: F401,F403
    import _core as _impl  # noqa: F401

__version__ = "0.1.0"
