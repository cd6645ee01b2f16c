"""Independent mel-cepstrum reference.

Recomputes the 12 coefficients for a 440 Hz tone frame at 16 kHz with numpy
and scipy only, following the same filterbank definition: magnitude
spectrum, 26 triangular mel filters over 0..fs/2 with
mel(f) = 2595 log10(1 + f/700), natural log floored at 1e-10, orthonormal
DCT-II, coefficients c1..c12.
"""

import numpy as np
from scipy.fft import dct


def mel(f):
    return 2595.0 * np.log10(1.0 + f / 700.0)


def mel_inv(m):
    return 700.0 * (10.0 ** (m / 2595.0) - 1.0)


def reference_mfcc(frame, fs, n_filters=26, n_coeffs=12, floor=1e-10):
    n = len(frame)
    mag = np.abs(np.fft.rfft(frame))
    bin_hz = fs / n
    centers = mel_inv(mel(fs / 2.0) * np.arange(n_filters + 2) / (n_filters + 1))
    outputs = np.zeros(n_filters)
    for m in range(n_filters):
        lo, mid, hi = centers[m], centers[m + 1], centers[m + 2]
        for k in range(len(mag)):
            fk = k * bin_hz
            if lo <= fk <= mid:
                w = (fk - lo) / (mid - lo)
            elif mid < fk <= hi:
                w = (hi - fk) / (hi - mid)
            else:
                continue
            outputs[m] += w * mag[k]
    logmel = np.log(np.maximum(outputs, floor))
    return dct(logmel, type=2, norm="ortho")[1 : n_coeffs + 1]


def main():
    fs = 16000
    n = 400
    k = np.arange(n)
    tone = 0.5 * np.sin(2.0 * np.pi * 440.0 * k / fs)
    hamming = 0.54 - 0.46 * np.cos(2.0 * np.pi * k / (n - 1))
    coeffs = reference_mfcc(tone * hamming, fs)
    print("440 Hz tone frame, c1..c12:")
    for c in coeffs:
        print(f"  {c:.15g},")


if __name__ == "__main__":
    main()
