#pragma once

#include <optional>
#include <span>
#include <vector>

#include "perfect/numerics.hpp"

namespace perfect {

/// One distinct eigenvalue. `exact` is set when a closed form produced a
/// rational value; `sources` keeps the generating index tuples of formula terms.
struct SpectrumEntry {
  Complex value;
  Index multiplicity = 0;
  std::optional<Rational> exact;
  std::vector<std::vector<int>> sources;
};

/// Multiset of eigenvalues. Entries are pairwise farther apart than the
/// clustering radius and are ordered by (real, imag).
class Spectrum {
 public:
  struct Term {
    Complex value;
    std::optional<Rational> exact;
    std::vector<int> source;
  };

  Spectrum() = default;

  static Spectrum from_values(std::span<const Complex> values, double radius = kClusterRadius);
  static Spectrum from_terms(std::span<const Term> terms, double radius = kClusterRadius);
  static Spectrum from_eigen(const EigenSystem& es, double radius = kClusterRadius);

  const std::vector<SpectrumEntry>& entries() const { return entries_; }

  /// Total multiplicity.
  Index size() const;

  /// Every eigenvalue repeated by multiplicity, in entry order.
  std::vector<Complex> values() const;

  Index multiplicity_of(Complex value, double radius = kClusterRadius) const;

 private:
  std::vector<SpectrumEntry> entries_;
};

/// Largest distance in a nearest-neighbor matching of the two expanded
/// multisets; +infinity when the sizes differ.
double max_discrepancy(const Spectrum& a, const Spectrum& b);

/// Same size and every entry of a matched by an entry of b with equal
/// multiplicity within radius.
bool multiset_equal(const Spectrum& a, const Spectrum& b, double radius = kClusterRadius);

/// Each eigenvalue of sub occurs in super with at least the same multiplicity.
bool is_submultiset(const Spectrum& sub, const Spectrum& super, double radius = kClusterRadius);

}  // namespace perfect
