"""prokit: exact commutative algebra over finite rings with proregularity
profiles, homological checks, and a batch verification CLI."""

__version__ = "0.1.0"
