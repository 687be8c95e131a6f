"""Sequential parametrized topological complexity of the obstacle fibration,
with exact cup-product witnesses and a certified multi-robot path planner."""

__version__ = "0.1.0"
