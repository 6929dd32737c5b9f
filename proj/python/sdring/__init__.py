"""Spectra of disordered ring generators and their minimal Lindbladian."""

try:
    from sdring._sdring import *  # noqa: F401,F403  (installed layout)
    from sdring._sdring import __version__  # noqa: F401
except ImportError:  # build-tree layout: _sdring.so on PYTHONPATH
    from _sdring import *  # noqa: F401,F403
    from _sdring import __version__  # noqa: F401
