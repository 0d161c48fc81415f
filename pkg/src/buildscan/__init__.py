"""Rapid building detection on RGB overhead imagery.

Candidate regions come from contour tracing of Canny edge maps computed over
a grid of hysteresis thresholds.  Each candidate is rotation-normalized,
rendered to a fixed-size grayscale chip, and described by two-rectangle Haar
contrast features.  A boosted-stump or Gaussian naive Bayes classifier filters
candidates into buildings; an optional greedy box-permutation search recovers
buildings whose candidate box was off.
"""

__version__ = "0.1.0"
