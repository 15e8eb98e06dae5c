#pragma once

#include <complex>
#include <random>
#include <vector>

namespace tdoa {

enum class WaveformKind { impulse, band_limited };

struct SignalParams {
  double sample_rate = 1e9;              // samples per second
  int num_samples = 1024;
  double noise_stddev = 0.05;            // per-receiver, per real/imag component
  double propagation_speed = 299792458.0;  // meters per second
  WaveformKind waveform_kind = WaveformKind::band_limited;
  bool subsample_peak = false;           // parabolic peak refinement for range conversion
};

struct ReceivedSignal {
  std::vector<std::complex<double>> samples;
  int receiver_id = 0;
  std::complex<double> gain{1.0, 0.0};
  int true_delay_samples = 0;  // held for test oracles only
};

// Transmit waveform: a unit impulse, or a band-limited pseudo-random sequence
// (white Gaussian through a 31-tap windowed-sinc low-pass, cutoff 0.25*fs,
// normalized to unit RMS) whose autocorrelation has a sharp peak.
std::vector<double> make_waveform(WaveformKind kind, int num_samples,
                                  std::mt19937_64& rng);

// z = gain * waveform shifted right by delay_samples (zero padded, no wraparound)
// plus complex Gaussian noise with per-component stddev noise_stddev.
ReceivedSignal synthesize_received(const std::vector<double>& waveform,
                                   int delay_samples, std::complex<double> gain,
                                   double noise_stddev, std::mt19937_64& rng);

// z_bar = (conj(gain) / |gain|^2) * samples; undoes the channel gain exactly.
std::vector<std::complex<double>> equalize(const ReceivedSignal& z);

// Normalized cross-correlation curve over lags -max_lag..+max_lag:
// R(l) = Re(sum_u a(u) * conj(b(u+l))) / (sqrt(sum|a|^2) * sqrt(sum|b|^2)).
// Result index l + max_lag holds R(l). The serial version is the reference
// implementation; ncc_curve parallelizes over lags and is bit-identical to it.
std::vector<double> ncc_curve_serial(const std::vector<std::complex<double>>& a,
                                     const std::vector<std::complex<double>>& b,
                                     int max_lag);
std::vector<double> ncc_curve(const std::vector<std::complex<double>>& a,
                              const std::vector<std::complex<double>>& b,
                              int max_lag);

struct NccPeak {
  int lag = 0;
  double coefficient = 0.0;
};

// Lag in [-max_lag, +max_lag] maximizing the NCC, and the value there.
// Positive lag means a leads b (b is the more delayed signal). Ties prefer
// the smaller |lag|, then the smaller lag.
NccPeak ncc_peak(const std::vector<std::complex<double>>& a,
                 const std::vector<std::complex<double>>& b, int max_lag);

struct PairRangeDifference {
  int i = 0;  // 1-based receiver indices, i < j
  int j = 0;
  double range_difference = 0.0;  // meters
};

// For every pair i<j (lexicographic order), the range difference
// c * lag_ij / sample_rate, with lag_ij the NCC peak between the equalized
// signals oriented so that positive values mean receiver i is farther.
std::vector<PairRangeDifference> estimate_range_differences(
    const std::vector<ReceivedSignal>& signals, const SignalParams& params);

}  // namespace tdoa
