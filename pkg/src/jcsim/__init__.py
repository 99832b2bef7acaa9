"""Driven damped Jaynes-Cummings oscillator on a truncated Fock basis.

Subpackages cover the operator algebra, the Lindblad superoperator and its
conditioned variants, time evolution and steady states, two-time photon
correlations, weak-drive closed forms, and Husimi Q distributions.

Submodules are imported lazily so that the command line entry point can
configure threading environment variables before numpy is loaded.
"""

__version__ = "0.1.0"

_SUBMODULES = (
    "params",
    "operators",
    "liouvillian",
    "dynamics",
    "correlations",
    "analytics",
    "qfunction",
    "presets",
    "validation",
    "cli",
)


def __getattr__(name):
    if name in _SUBMODULES:
        import importlib

        module = importlib.import_module(f".{name}", __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(list(globals()) + list(_SUBMODULES))
