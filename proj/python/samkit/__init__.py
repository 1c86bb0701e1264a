"""Lane-change maneuver modeling toolkit.

Thin wrapper over the compiled ``_samkit`` extension: sinusoidal-acceleration
kinematics, least-squares parameter recovery, the hybrid output codec,
scenario tooling and the scoring harness.
"""

try:
    from samkit._samkit import *  # noqa: F401,F403  (installed layout)
    from samkit._samkit import __version__  # noqa: F401
except ImportError:  # development layout: extension on PYTHONPATH
    from _samkit import *  # noqa: F401,F403
    from _samkit import __version__  # noqa: F401
