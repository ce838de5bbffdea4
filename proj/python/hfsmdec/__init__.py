"""Thin modular decomposition of finite state machines.

The heavy lifting lives in the compiled extension; this package re-exports
its surface: machines (Fsm/Hfsm), the quotient/restriction/expansion
algebra, module predicates and exhaustive oracles, decomposition trees,
hierarchy maximization, cores, file formats, and random instance
generators.
"""

from ._hfsmdec import *  # noqa: F401,F403
from ._hfsmdec import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
