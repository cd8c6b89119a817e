"""Restless multi-armed bandit toolkit: chains, index policies, regret bounds."""

try:
    from ._core import *  # noqa: F401,F403
except ImportError:
    # Build-tree layout: _core sits next to the package root on sys.path.
    from _core import *  # noqa: F401,F403
