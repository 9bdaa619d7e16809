#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "resilog/poly.hpp"

namespace resilog {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Tunables of the floating-point engine. Defaults make runs reproducible.
struct NumericConfig {
  std::uint64_t seed = 0;
  double newton_tol = 1e-12;
  int newton_max_iter = 60;
  double dedupe_radius = 1e-6;
  double search_radius = 0.5;
  std::vector<double> eps_levels{1e-3, 1e-4};
  int grid_per_axis = 5;

  // Throws std::invalid_argument on nonsensical values.
  void validate() const;
};

// Small dense complex matrix, row-major.
struct CMatrix {
  std::size_t n = 0;
  std::vector<Complex> data;

  explicit CMatrix(std::size_t size = 0) : n(size), data(size * size) {}
  Complex& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }
  [[nodiscard]] Complex trace() const;
  [[nodiscard]] Complex det() const;
  // Solves (*this) x = rhs by partial pivoting; nullopt when numerically singular.
  [[nodiscard]] std::optional<CVector> solve(const CVector& rhs) const;
};

// eps * (L (x - center) + c): the random affine perturbation.
struct AffinePerturbation {
  CVector center;
  std::vector<std::vector<double>> linear;
  std::vector<double> constant;
  double eps = 0.0;
};

// Coefficients k / 2^20 drawn uniformly from [-1, 1].
AffinePerturbation random_affine(std::size_t dim, const CVector& center, std::mt19937_64& rng);

// Deterministic stream seed for a (seed, tag) pair.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag);

// Polynomial compiled to double coefficients for fast complex evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const MultiPoly& p);
  [[nodiscard]] Complex operator()(const CVector& x) const;

 private:
  std::vector<std::pair<Exponent, double>> terms_;
};

// A square polynomial system compiled for complex evaluation, with an
// optional affine perturbation added on top.
class PolySystem {
 public:
  explicit PolySystem(const std::vector<MultiPoly>& components);

  [[nodiscard]] std::size_t dim() const { return components_.size(); }
  void set_perturbation(AffinePerturbation perturbation) { perturbation_ = std::move(perturbation); }

  [[nodiscard]] CVector value(const CVector& x) const;
  [[nodiscard]] CMatrix jacobian(const CVector& x) const;

 private:
  std::vector<CompiledPoly> components_;
  std::vector<std::vector<CompiledPoly>> partials_;
  std::optional<AffinePerturbation> perturbation_;
};

double max_norm(const CVector& x);
double distance(const CVector& a, const CVector& b);

struct NewtonOutcome {
  CVector root;
  double step = 0.0;  // size of the final Newton correction
};

// Stops once |F(x)|_inf < tol; nullopt on divergence or iteration cap.
std::optional<NewtonOutcome> newton(const PolySystem& system, CVector start,
                                    const NumericConfig& cfg);

// Starts: `grid` values per real and imaginary axis of each coordinate
// inside the polydisk of `radius` around `center`.
std::vector<CVector> polydisk_starts(const CVector& center, double radius, int grid);

// Starts on a real box [lo, hi]^dim, optionally with imaginary offsets in
// [-imag, imag] (imag = 0 gives real starts only).
std::vector<CVector> box_starts(std::size_t dim, double lo, double hi, double imag, int grid);

// Runs Newton from every start and merges roots closer than `dedupe_radius`.
std::vector<NewtonOutcome> multi_start(const PolySystem& system,
                                       const std::vector<CVector>& starts,
                                       const NumericConfig& cfg);

}  // namespace resilog
