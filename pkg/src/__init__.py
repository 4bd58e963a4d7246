"""mixgraph.

Estimation, sampling and prediction of stationary and time-varying mixed
graphical models and mixed vector autoregressive models.
"""

__version__ = "1.0.0"
__author__ = "mixgraph developers"
__description__ = "Mixed graphical and mixed VAR models for mixed-type data"
