"""GraphVRNN: autoregressive variational graph generation over BFS sequences.

The package covers the full workflow: synthetic benchmark datasets
(`datasets`), the graph <-> sequence codec (`graphs`), the differentiable
compute layer (`nn`), the model variants and their bound (`model`),
optimization (`training`), autoregressive sampling (`generation`), the
MMD/EMD evaluation protocol (`evaluation`, `orbits`), report rendering
(`reporting`), and a single CLI entry point (`cli`).
"""

__version__ = "0.1.0"
