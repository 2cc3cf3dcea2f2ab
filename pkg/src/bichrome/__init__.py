"""bichrome: exact quantum-topology invariants over finite ribbon Hopf backends."""

__version__ = "0.1.0"
