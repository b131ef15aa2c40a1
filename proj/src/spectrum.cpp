#include "perfect/spectrum.hpp"

#include <cmath>
#include <limits>

namespace perfect {

Spectrum Spectrum::from_values(std::span<const Complex> values, double radius) {
  std::vector<Term> terms;
  terms.reserve(values.size());
  for (Complex v : values) terms.push_back({v, std::nullopt, {}});
  return from_terms(terms, radius);
}

Spectrum Spectrum::from_eigen(const EigenSystem& es, double radius) {
  return from_values(es.values, radius);
}

Spectrum Spectrum::from_terms(std::span<const Term> terms, double radius) {
  std::vector<Complex> values;
  values.reserve(terms.size());
  for (const Term& t : terms) values.push_back(t.exact ? to_complex(*t.exact) : t.value);

  Spectrum out;
  for (const auto& cluster : cluster_values(values, radius)) {
    SpectrumEntry entry;
    entry.multiplicity = static_cast<Index>(cluster.size());
    Complex sum = 0.0;
    for (std::size_t i : cluster) {
      sum += values[i];
      if (terms[i].exact && !entry.exact) entry.exact = terms[i].exact;
      if (!terms[i].source.empty()) entry.sources.push_back(terms[i].source);
    }
    entry.value = entry.exact ? to_complex(*entry.exact) : sum / static_cast<double>(cluster.size());
    out.entries_.push_back(std::move(entry));
  }
  return out;
}

Index Spectrum::size() const {
  Index total = 0;
  for (const auto& e : entries_) total += e.multiplicity;
  return total;
}

std::vector<Complex> Spectrum::values() const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (const auto& e : entries_)
    for (Index i = 0; i < e.multiplicity; ++i) out.push_back(e.value);
  return out;
}

Index Spectrum::multiplicity_of(Complex value, double radius) const {
  for (const auto& e : entries_)
    if (std::abs(e.value - value) <= radius) return e.multiplicity;
  return 0;
}

double max_discrepancy(const Spectrum& a, const Spectrum& b) {
  const std::vector<Complex> left = a.values();
  const std::vector<Complex> right = b.values();
  if (left.size() != right.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(right.size(), false);
  double worst = 0.0;
  for (Complex x : left) {
    std::size_t best = right.size();
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - right[j]);
      if (d < best_distance) {
        best_distance = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_distance);
  }
  return worst;
}

bool multiset_equal(const Spectrum& a, const Spectrum& b, double radius) {
  if (a.size() != b.size() || a.entries().size() != b.entries().size()) return false;
  for (const auto& e : a.entries())
    if (b.multiplicity_of(e.value, radius) != e.multiplicity) return false;
  return true;
}

bool is_submultiset(const Spectrum& sub, const Spectrum& super, double radius) {
  for (const auto& e : sub.entries())
    if (super.multiplicity_of(e.value, radius) < e.multiplicity) return false;
  return true;
}

}  // namespace perfect
