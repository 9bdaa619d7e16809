#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resilog/matrix.hpp"
#include "resilog/residue.hpp"

namespace resilog {

struct DefinitenessCheck {
  bool negative_definite = false;
  std::optional<std::size_t> failing_k;  // first k (1-based) whose minor has the wrong sign
  std::vector<Rational> minors;          // leading principal minors, k = 1..r
};

// (-1)^k * (k-th leading principal minor) > 0 for every k.
// Throws NonSquare, AsymmetricMatrix.
DefinitenessCheck check_negative_definite(const RatMatrix& M);

enum class Singularity { terminal, canonical, log_terminal, log_canonical, not_log_canonical };
std::string to_string(Singularity s);

// Finest class of the nested chain terminal < canonical < log_terminal < log_canonical.
Singularity classify(std::span<const Rational> a);

struct DiscrepancyProblem {
  RatMatrix M;               // intersection matrix (D_j . D_k)
  std::vector<Rational> I;   // exceptional residues
  std::vector<unsigned> g;   // genera, default 0

  [[nodiscard]] std::size_t r() const { return M.rows(); }
};

struct DiscrepancyResult {
  std::vector<Rational> b;            // log discrepancies
  std::vector<Rational> a;            // discrepancies, a = b - 1
  Singularity classification = Singularity::not_log_canonical;
  std::vector<Rational> reconstructed_I;  // -M b
  bool round_trip = false;                // reconstructed_I == I
  std::vector<Rational> adjunction_I;     // expected from (M, g)
  bool matches_adjunction = false;
  DefinitenessCheck definiteness;
};

// I_j = 2 - 2 g_j - sum_{k != j} M_jk. Throws NonSquare, DimensionMismatch.
std::vector<Rational> expected_exceptional_residues(const RatMatrix& M,
                                                    std::span<const unsigned> g = {});

// b = -M^{-1} I. Throws NotNegativeDefinite, AsymmetricMatrix, NonSquare,
// DimensionMismatch.
DiscrepancyResult solve_discrepancies(const DiscrepancyProblem& p);

struct CyclicQuotientModel {
  unsigned m = 0;
  std::vector<ChartField> charts;        // (x, b) and (y, c)
  std::vector<SingularPoint> points;     // the origin of each chart
  std::vector<ResidueRecord> residues;   // i = 1, one per point
  Rational I_E;
  RatMatrix M;
  DiscrepancyResult result;
};

// Throws InvalidProblem for m < 2.
CyclicQuotientModel cyclic_quotient_model(unsigned m);

}  // namespace resilog
