"""tdlite: temporal DL-Lite knowledge bases, their translation to LTL, and
satisfiability checking.

The pipeline: a knowledge base is translated to a one-variable first-order
temporal formula (`qtl`), grounded over its constants to propositional LTL
with past (`ground`), and — over the integer flow — made past-free
(`pastelim`).  Satisfiability is decided by the built-in oracle (`oracle`)
or external solvers (`solvers`).  `randgen` reproduces the random benchmark
methodology; `cli` ties everything together.
"""

__version__ = "0.1.0"
