#include "resilog/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resilog {

void NumericConfig::validate() const {
  if (!(newton_tol > 0)) throw std::invalid_argument("newton_tol must be positive");
  if (newton_max_iter < 1) throw std::invalid_argument("newton_max_iter must be at least 1");
  if (!(dedupe_radius > 0)) throw std::invalid_argument("dedupe_radius must be positive");
  if (!(search_radius > dedupe_radius)) {
    throw std::invalid_argument("search_radius must exceed dedupe_radius");
  }
  if (eps_levels.size() != 2 || !(eps_levels[0] > eps_levels[1]) || !(eps_levels[1] > 0)) {
    throw std::invalid_argument("eps_levels must be two decreasing positive values");
  }
  if (grid_per_axis < 1) throw std::invalid_argument("grid_per_axis must be at least 1");
}

Complex CMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

Complex CMatrix::det() const {
  CMatrix a = *this;
  Complex det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (a(pivot, k) == Complex{}) return Complex{};
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return det;
}

std::optional<CVector> CMatrix::solve(const CVector& rhs) const {
  CMatrix a = *this;
  CVector b = rhs;
  double scale = 0.0;
  for (const auto& v : data) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::nullopt;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (std::abs(a(pivot, k)) <= 1e-300 + scale * 1e-15) return std::nullopt;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }
  CVector x(n);
  for (std::size_t k = n; k-- > 0;) {
    Complex s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

AffinePerturbation random_affine(std::size_t dim, const CVector& center, std::mt19937_64& rng) {
  constexpr double kScale = 1 << 20;
  auto draw = [&rng]() {
    const auto k = static_cast<long long>(rng() % (2 * (1ULL << 20) + 1)) - (1LL << 20);
    return static_cast<double>(k) / kScale;
  };
  AffinePerturbation out;
  out.center = center;
  out.linear.assign(dim, std::vector<double>(dim));
  out.constant.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out.linear[i][j] = draw();
    out.constant[i] = draw();
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag) {
  // FNV-1a over the tag, mixed with the seed through splitmix64.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL + h;
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

CompiledPoly::CompiledPoly(const MultiPoly& p) {
  terms_.reserve(p.size());
  for (const auto& [e, c] : p.terms()) terms_.emplace_back(e, c.to_double());
}

Complex CompiledPoly::operator()(const CVector& x) const {
  Complex sum{};
  for (const auto& [e, c] : terms_) {
    Complex term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

PolySystem::PolySystem(const std::vector<MultiPoly>& components) {
  for (const auto& p : components) {
    if (p.nvars() != components.size()) {
      throw std::invalid_argument("polynomial system must be square");
    }
    components_.emplace_back(p);
    std::vector<CompiledPoly> row;
    for (std::size_t j = 0; j < p.nvars(); ++j) row.emplace_back(p.partial(j));
    partials_.push_back(std::move(row));
  }
}

CVector PolySystem::value(const CVector& x) const {
  CVector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = components_[i](x);
  if (perturbation_) {
    const auto& p = *perturbation_;
    for (std::size_t i = 0; i < dim(); ++i) {
      Complex s = p.constant[i];
      for (std::size_t j = 0; j < dim(); ++j) s += p.linear[i][j] * (x[j] - p.center[j]);
      out[i] += p.eps * s;
    }
  }
  return out;
}

CMatrix PolySystem::jacobian(const CVector& x) const {
  CMatrix jac(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) {
      jac(i, j) = partials_[i][j](x);
      if (perturbation_) jac(i, j) += perturbation_->eps * perturbation_->linear[i][j];
    }
  }
  return jac;
}

double max_norm(const CVector& x) {
  double m = 0.0;
  for (const auto& v : x) m = std::max(m, std::abs(v));
  return m;
}

double distance(const CVector& a, const CVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::optional<NewtonOutcome> newton(const PolySystem& system, CVector start,
                                    const NumericConfig& cfg) {
  CVector x = std::move(start);
  double last_step = 0.0;
  for (int iter = 0; iter <= cfg.newton_max_iter; ++iter) {
    const CVector fx = system.value(x);
    const double residual = max_norm(fx);
    if (!std::isfinite(residual)) return std::nullopt;
    if (residual < cfg.newton_tol) return NewtonOutcome{std::move(x), last_step};
    if (iter == cfg.newton_max_iter) break;
    const auto step = system.jacobian(x).solve(fx);
    if (!step) return std::nullopt;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= (*step)[i];
    last_step = max_norm(*step);
    if (!std::isfinite(last_step) || max_norm(x) > 1e12) return std::nullopt;
  }
  return std::nullopt;
}

namespace {

std::vector<double> axis(double lo, double hi, int grid) {
  if (grid == 1) return {(lo + hi) / 2};
  std::vector<double> out;
  for (int i = 0; i < grid; ++i) out.push_back(lo + (hi - lo) * i / (grid - 1));
  return out;
}

// Cartesian product of per-coordinate candidate lists.
std::vector<CVector> product(const std::vector<std::vector<Complex>>& per_coord) {
  std::vector<CVector> out{CVector{}};
  for (const auto& options : per_coord) {
    std::vector<CVector> next;
    next.reserve(out.size() * options.size());
    for (const auto& prefix : out) {
      for (const auto& v : options) {
        CVector x = prefix;
        x.push_back(v);
        next.push_back(std::move(x));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<CVector> polydisk_starts(const CVector& center, double radius, int grid) {
  const auto ticks = axis(-radius, radius, grid);
  std::vector<Complex> disk;
  for (const double re : ticks) {
    for (const double im : ticks) {
      if (std::hypot(re, im) <= radius * (1 + 1e-12)) disk.emplace_back(re, im);
    }
  }
  std::vector<std::vector<Complex>> per_coord;
  for (const auto& c : center) {
    std::vector<Complex> shifted;
    for (const auto& d : disk) shifted.push_back(c + d);
    per_coord.push_back(std::move(shifted));
  }
  return product(per_coord);
}

std::vector<CVector> box_starts(std::size_t dim, double lo, double hi, double imag, int grid) {
  const auto re_ticks = axis(lo, hi, grid);
  const auto im_ticks = imag > 0 ? axis(-imag, imag, grid) : std::vector<double>{0.0};
  std::vector<Complex> options;
  for (const double re : re_ticks) {
    for (const double im : im_ticks) options.emplace_back(re, im);
  }
  return product(std::vector<std::vector<Complex>>(dim, options));
}

std::vector<NewtonOutcome> multi_start(const PolySystem& system,
                                       const std::vector<CVector>& starts,
                                       const NumericConfig& cfg) {
  std::vector<NewtonOutcome> roots;
  for (const auto& start : starts) {
    auto outcome = newton(system, start, cfg);
    if (!outcome) continue;
    const bool seen = std::any_of(roots.begin(), roots.end(), [&](const NewtonOutcome& r) {
      return distance(r.root, outcome->root) < cfg.dedupe_radius;
    });
    if (!seen) roots.push_back(std::move(*outcome));
  }
  return roots;
}

}  // namespace resilog
