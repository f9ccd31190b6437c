#pragma once

#include <string>

#include "ellwishart/rng.hpp"

namespace ellw {

enum class GeneratorKind { Gaussian, T, GeneralizedGaussian, Kotz };

/// One of the four closed-form density-generator families. Exposes the
/// log of h_d, the modular moments m_k = E[Q^k] of the second-order modular
/// Q, the density of Q, and a sampler for Q. All heavy arithmetic runs in
/// the log domain (np regularly exceeds a few thousand).
class DensityGenerator {
 public:
  static DensityGenerator gaussian();
  static DensityGenerator t(double nu);
  static DensityGenerator generalized_gaussian(double beta);
  static DensityGenerator kotz(double alpha, double beta, double r);

  GeneratorKind kind() const { return kind_; }
  double nu() const { return nu_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double r() const { return r_; }
  std::string name() const;

  /// log h_d(t).
  double log_h(int d, double t) const;

  /// True when m_k exists at dimension d.
  bool moment_exists(int d, double k) const;
  /// Human-readable bound on k for m_k at dimension d, used in error text.
  std::string moment_bound(int d) const;

  /// m_k = E[Q^k]; throws moment_error naming the violated bound.
  double modular_moment(int d, double k) const;
  double log_modular_moment(int d, double k) const;

  /// Density of Q at t (Theorem-style radial density).
  double modular_pdf(int d, double t) const;

  /// One draw of Q at dimension d.
  double sample_q(int d, Rng& rng) const;

 private:
  DensityGenerator(GeneratorKind kind, double nu, double alpha, double beta, double r)
      : kind_(kind), nu_(nu), alpha_(alpha), beta_(beta), r_(r) {}

  void require_valid_at(int d) const;

  GeneratorKind kind_;
  double nu_;
  double alpha_;
  double beta_;
  double r_;
};

}  // namespace ellw
