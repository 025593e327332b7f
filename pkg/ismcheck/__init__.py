"""
ismcheck - property-based testing for indexed state machines

Generates bounded traces of stateful models from the models' own
next-state functions, checks properties over them, and validates the
outcome against an exact Markov-chain oracle.
"""

__version__ = "1.0.0"
