"""Independent oracles shared by the test modules.

These deliberately avoid the library's own analysis code paths wherever
they are used to check those paths.
"""

import numpy as np


def fft_spectrum(buffer):
    """One-sided magnitude spectrum of the whole buffer, no window."""
    return np.abs(np.fft.rfft(buffer))


def fft_peak_hz(buffer, sample_rate):
    """Frequency of the strongest FFT bin."""
    mags = fft_spectrum(buffer)
    return np.argmax(mags) * sample_rate / len(buffer)


def sign_change_count(buffer):
    signs = np.signbit(buffer)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def estimate_rt60(ir, sample_rate):
    """RT60 via Schroeder backward integration, slope fit on -5..-35 dB."""
    edc = np.cumsum((ir**2)[::-1])[::-1]
    edc_db = 10.0 * np.log10(edc / edc[0])
    t = np.arange(len(ir)) / sample_rate
    i_lo = int(np.argmax(edc_db <= -5.0))
    i_hi = int(np.argmax(edc_db <= -35.0))
    assert 0 < i_lo < i_hi, "impulse response too short for a decay fit"
    slope = np.polyfit(t[i_lo:i_hi], edc_db[i_lo:i_hi], 1)[0]
    return -60.0 / slope
