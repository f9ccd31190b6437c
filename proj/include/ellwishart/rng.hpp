#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace ellw {

/// Deterministic random stream: std::mt19937_64 (bit-specified by the
/// standard) plus explicit variate transforms, so a given seed produces the
/// same sequence on every platform. Not thread safe; use one Rng per worker,
/// seeded via derive_seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (spare value cached).
  double normal();

  /// Gamma(shape, scale) via Marsaglia-Tsang squeeze, with the
  /// u^(1/shape) boost for shape < 1.
  double gamma(double shape, double scale);

  double chi_square(double df) { return gamma(0.5 * df, 2.0); }
  double chi(double df);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Deterministic child-stream seed derivation (splitmix64 mixing), used to
/// hand independent streams to parallel workers or per-class fits.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// FNV-1a hash of a string, for label-keyed stream derivation.
std::uint64_t hash_label(const std::string& label);

}  // namespace ellw
