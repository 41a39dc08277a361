"""Language-games as open games: process-grammar parsing and compositional equilibria."""

__version__ = "0.1.0"
