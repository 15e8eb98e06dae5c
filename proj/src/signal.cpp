#include "tdoa/signal.hpp"

#include <cmath>
#include <numbers>

#include "tdoa/errors.hpp"

namespace tdoa {

namespace {

constexpr int kFilterTaps = 31;
constexpr double kFilterCutoff = 0.25;  // fraction of the sample rate

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Hamming windowed-sinc low-pass prototype.
std::vector<double> lowpass_taps() {
  std::vector<double> taps(kFilterTaps);
  const double mid = (kFilterTaps - 1) / 2.0;
  for (int t = 0; t < kFilterTaps; ++t) {
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * t / (kFilterTaps - 1));
    taps[t] = 2.0 * kFilterCutoff * sinc(2.0 * kFilterCutoff * (t - mid)) * window;
  }
  return taps;
}

double signal_energy(const std::vector<std::complex<double>>& s) {
  double e = 0.0;
  for (const auto& v : s) e += std::norm(v);
  return e;
}

// Re(sum_u a(u) * conj(b(u+l))) over the overlapping index range.
double lag_product(const std::vector<std::complex<double>>& a,
                   const std::vector<std::complex<double>>& b, int lag) {
  const int n = static_cast<int>(a.size());
  const int lo = std::max(0, -lag);
  const int hi = std::min(n, n - lag);
  double sum = 0.0;
  for (int u = lo; u < hi; ++u) {
    sum += a[u].real() * b[u + lag].real() + a[u].imag() * b[u + lag].imag();
  }
  return sum;
}

}  // namespace

std::vector<double> make_waveform(WaveformKind kind, int num_samples,
                                  std::mt19937_64& rng) {
  if (num_samples <= 0) {
    throw InvalidArgumentError("waveform length must be positive");
  }
  std::vector<double> s(num_samples, 0.0);
  if (kind == WaveformKind::impulse) {
    s[0] = 1.0;
    return s;
  }
  const std::vector<double> taps = lowpass_taps();
  std::vector<double> white(num_samples + kFilterTaps - 1);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (double& w : white) w = unit(rng);
  double energy = 0.0;
  for (int u = 0; u < num_samples; ++u) {
    double acc = 0.0;
    for (int t = 0; t < kFilterTaps; ++t) acc += taps[t] * white[u + t];
    s[u] = acc;
    energy += acc * acc;
  }
  const double rms = std::sqrt(energy / num_samples);
  for (double& v : s) v /= rms;
  return s;
}

ReceivedSignal synthesize_received(const std::vector<double>& waveform,
                                   int delay_samples, std::complex<double> gain,
                                   double noise_stddev, std::mt19937_64& rng) {
  const int n = static_cast<int>(waveform.size());
  if (delay_samples < 0 || delay_samples >= n) {
    throw InvalidArgumentError("delay of " + std::to_string(delay_samples) +
                               " samples is outside [0, " + std::to_string(n) +
                               ")");
  }
  if (noise_stddev < 0.0) {
    throw InvalidArgumentError("noise stddev must be nonnegative");
  }
  ReceivedSignal z;
  z.gain = gain;
  z.true_delay_samples = delay_samples;
  z.samples.resize(n);
  for (int u = delay_samples; u < n; ++u) {
    z.samples[u] = gain * waveform[u - delay_samples];
  }
  if (noise_stddev > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_stddev);
    for (auto& v : z.samples) {
      const double re = noise(rng);
      const double im = noise(rng);
      v += std::complex<double>(re, im);
    }
  }
  return z;
}

std::vector<std::complex<double>> equalize(const ReceivedSignal& z) {
  const double mag2 = std::norm(z.gain);
  if (mag2 == 0.0) {
    throw DegenerateChannelError("cannot equalize receiver " +
                                 std::to_string(z.receiver_id) +
                                 ": zero channel gain");
  }
  const std::complex<double> scale = std::conj(z.gain) / mag2;
  std::vector<std::complex<double>> out(z.samples.size());
  for (std::size_t u = 0; u < z.samples.size(); ++u) out[u] = scale * z.samples[u];
  return out;
}

std::vector<double> ncc_curve_serial(const std::vector<std::complex<double>>& a,
                                     const std::vector<std::complex<double>>& b,
                                     int max_lag) {
  const int n = static_cast<int>(a.size());
  if (b.size() != a.size()) {
    throw InvalidArgumentError("correlation inputs must have equal length");
  }
  if (max_lag <= 0 || max_lag >= n) {
    throw InvalidArgumentError("max lag must lie in (0, length)");
  }
  const double denom = std::sqrt(signal_energy(a)) * std::sqrt(signal_energy(b));
  if (denom == 0.0) {
    throw DegenerateSignalError("zero-energy input to the correlator");
  }
  std::vector<double> curve(2 * max_lag + 1);
  for (int l = -max_lag; l <= max_lag; ++l) {
    curve[l + max_lag] = lag_product(a, b, l) / denom;
  }
  return curve;
}

std::vector<double> ncc_curve(const std::vector<std::complex<double>>& a,
                              const std::vector<std::complex<double>>& b,
                              int max_lag) {
  const int n = static_cast<int>(a.size());
  if (b.size() != a.size()) {
    throw InvalidArgumentError("correlation inputs must have equal length");
  }
  if (max_lag <= 0 || max_lag >= n) {
    throw InvalidArgumentError("max lag must lie in (0, length)");
  }
  const double denom = std::sqrt(signal_energy(a)) * std::sqrt(signal_energy(b));
  if (denom == 0.0) {
    throw DegenerateSignalError("zero-energy input to the correlator");
  }
  std::vector<double> curve(2 * max_lag + 1);
#pragma omp parallel for schedule(static)
  for (int l = -max_lag; l <= max_lag; ++l) {
    curve[l + max_lag] = lag_product(a, b, l) / denom;
  }
  return curve;
}

NccPeak ncc_peak(const std::vector<std::complex<double>>& a,
                 const std::vector<std::complex<double>>& b, int max_lag) {
  const std::vector<double> curve = ncc_curve(a, b, max_lag);
  NccPeak best{-max_lag, curve.front()};
  for (int l = -max_lag + 1; l <= max_lag; ++l) {
    const double c = curve[l + max_lag];
    const bool closer =
        c == best.coefficient &&
        (std::abs(l) < std::abs(best.lag) ||
         (std::abs(l) == std::abs(best.lag) && l < best.lag));
    if (c > best.coefficient || closer) {
      best.lag = l;
      best.coefficient = c;
    }
  }
  return best;
}

std::vector<PairRangeDifference> estimate_range_differences(
    const std::vector<ReceivedSignal>& signals, const SignalParams& params) {
  const int n = static_cast<int>(signals.size());
  if (n < 2) {
    throw InvalidArgumentError("need at least two signals to form a pair");
  }
  const std::size_t len = signals.front().samples.size();
  for (const auto& z : signals) {
    if (z.samples.size() != len) {
      throw InvalidArgumentError("all signals must have equal length");
    }
  }

  std::vector<std::vector<std::complex<double>>> equalized(n);
  for (int idx = 0; idx < n; ++idx) {
    equalized[idx] = equalize(signals[idx]);
    if (signal_energy(equalized[idx]) == 0.0) {
      throw DegenerateSignalError("receiver " + std::to_string(idx + 1) +
                                  " produced a zero-energy signal");
    }
  }

  const int max_lag = static_cast<int>(len) - 1;
  const double meters_per_sample = params.propagation_speed / params.sample_rate;

  std::vector<PairRangeDifference> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      // Positive peak lag of (a=z_j, b=z_i) means receiver j's signal leads,
      // i.e. receiver i is farther; the lag equals (tau_i - tau_j) * fs.
      const auto& zj = equalized[j - 1];
      const auto& zi = equalized[i - 1];
      double lag;
      if (params.subsample_peak) {
        const std::vector<double> curve = ncc_curve(zj, zi, max_lag);
        int peak = 0;
        for (int l = 1; l < static_cast<int>(curve.size()); ++l) {
          if (curve[l] > curve[peak]) peak = l;
        }
        lag = static_cast<double>(peak - max_lag);
        if (peak > 0 && peak + 1 < static_cast<int>(curve.size())) {
          const double left = curve[peak - 1];
          const double mid = curve[peak];
          const double right = curve[peak + 1];
          const double denom = left - 2.0 * mid + right;
          if (denom < 0.0) lag += 0.5 * (left - right) / denom;
        }
      } else {
        lag = ncc_peak(zj, zi, max_lag).lag;
      }
      out.push_back({i, j, meters_per_sample * lag});
    }
  }
  return out;
}

}  // namespace tdoa
