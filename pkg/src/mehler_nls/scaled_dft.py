"""Bluestein evaluation of DFTs with an arbitrary real frequency scale."""

from __future__ import annotations

import numpy as np
import scipy.fft as sfft


def scaled_dft(b: np.ndarray, alpha: float, axis: int = -1) -> np.ndarray:
    """Return X_m = sum_n b_n exp(-i alpha m n), m, n = 0..N-1, along ``axis``.

    Uses m n = (m^2 + n^2 - (m-n)^2)/2, which turns the sum into a linear
    convolution with the chirp exp(i alpha k^2/2), evaluated by zero-padded
    FFTs in O(N log N). ``alpha`` is used directly in the exponent, so there
    is no branch ambiguity for |alpha| > pi.
    """
    b = np.moveaxis(np.asarray(b, dtype=complex), axis, -1)
    N = b.shape[-1]
    n = np.arange(N)
    chirp = np.exp(-0.5j * alpha * n * n)
    M = sfft.next_fast_len(2 * N - 1)
    k = np.arange(-(N - 1), N)
    kernel = np.zeros(M, dtype=complex)
    # kernel[(k mod M)] = exp(+i alpha k^2 / 2)
    kernel[k % M] = np.exp(0.5j * alpha * k * k)
    conv = sfft.ifft(sfft.fft(b * chirp, n=M, axis=-1) * sfft.fft(kernel), axis=-1)[..., :N]
    out = chirp * conv
    return np.moveaxis(out, -1, axis)


def direct_scaled_dft(b: np.ndarray, alpha: float) -> np.ndarray:
    """O(N^2) reference for :func:`scaled_dft` on a 1-D input."""
    N = len(b)
    n = np.arange(N)
    return np.exp(-1j * alpha * np.outer(n, n)) @ np.asarray(b, dtype=complex)
