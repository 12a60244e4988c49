"""Independent brute-force oracles used across the test suite.

Everything here deliberately avoids the library's own code paths: direct
summations, O(n^2) double loops, explicit dummy-variable regression, and a
hand-rolled sandwich. These are the reference implementations the fast
paths are checked against.
"""

from __future__ import annotations

import numpy as np


def fgt_bruteforce(incomes, z, alpha, weights=None) -> float:
    incomes = np.asarray(incomes, dtype=float)
    w = np.ones_like(incomes) if weights is None else np.asarray(weights, dtype=float)
    total = 0.0
    for yi, wi in zip(incomes, w):
        if yi < z:
            total += wi * ((z - yi) / z) ** alpha if alpha > 0 else wi
    return total / w.sum()


def watts_bruteforce(incomes, z, weights=None) -> float:
    incomes = np.asarray(incomes, dtype=float)
    w = np.ones_like(incomes) if weights is None else np.asarray(weights, dtype=float)
    total = 0.0
    for yi, wi in zip(incomes, w):
        if yi < z:
            total += wi * np.log(z / yi)
    return total / w.sum()


def gini_bruteforce(incomes, weights=None) -> float:
    """Relative mean absolute difference halved, via the full double sum."""
    y = np.asarray(incomes, dtype=float)
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    W = w.sum()
    ybar = (w * y).sum() / W
    diff = np.abs(y[:, None] - y[None, :])
    return float((w[:, None] * w[None, :] * diff).sum() / (2.0 * W**2 * ybar))


def lsdv_fit(y, X, groups):
    """Least squares with explicit group dummies; returns (slopes, residuals).

    The dummy block spans the intercept, so no separate constant column.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    labels = sorted(set(groups))
    D = np.column_stack([
        np.array([1.0 if g == lab else 0.0 for g in groups]) for lab in labels
    ])
    full = np.column_stack([D, X])
    coef, *_ = np.linalg.lstsq(full, y, rcond=None)
    slopes = coef[len(labels):]
    residuals = y - full @ coef
    return slopes, residuals, full, coef


def sandwich_bruteforce(design, residuals, clusters, K, small_sample=True):
    """Cluster sandwich with explicit loops; K feeds the (N-1)/(N-K) factor."""
    design = np.asarray(design, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    n, k = design.shape
    labels = sorted(set(clusters))
    G = len(labels)
    bread = np.linalg.inv(design.T @ design)
    meat = np.zeros((k, k))
    for lab in labels:
        s = np.zeros(k)
        for i in range(n):
            if clusters[i] == lab:
                s += design[i] * residuals[i]
        meat += np.outer(s, s)
    V = bread @ meat @ bread
    if small_sample:
        V *= (G / (G - 1)) * ((n - 1) / (n - K))
    return V


def hc1_vcov(design, residuals, K):
    """Heteroskedasticity-robust covariance with the N/(N-K) scale."""
    design = np.asarray(design, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    n = design.shape[0]
    bread = np.linalg.inv(design.T @ design)
    meat = (design * residuals[:, None] ** 2).T @ design
    return (n / (n - K)) * bread @ meat @ bread
