#include "massart/rng.hpp"

#include <algorithm>
#include <limits>

#include "massart/errors.hpp"

namespace massart {

std::uint64_t probability_threshold(const Rational& p) {
  if (p < 0 || p > 1) throw DomainError("probability outside [0, 1]");
  if (p == 1) return std::numeric_limits<std::uint64_t>::max();
  Integer scaled = (p.get_num() << 64) / p.get_den();
  return static_cast<std::uint64_t>(mpz_class(scaled >> 32).get_ui()) << 32 |
         static_cast<std::uint64_t>(mpz_class(scaled & 0xffffffffu).get_ui());
}

DiscreteSampler::DiscreteSampler(const std::vector<Rational>& probabilities) {
  if (probabilities.empty()) throw DomainError("empty probability vector");
  Rational cumulative = 0;
  thresholds_.reserve(probabilities.size());
  for (const auto& p : probabilities) {
    if (p < 0) throw DomainError("negative probability");
    cumulative += p;
    thresholds_.push_back(probability_threshold(std::min(cumulative, Rational(1))));
  }
  if (cumulative != 1) throw DomainError("probabilities do not sum to one");
}

std::size_t DiscreteSampler::draw(Rng& rng) const {
  const std::uint64_t u = rng.next();
  auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), u);
  if (it == thresholds_.end()) {
    // u = 2^64 - 1: the last point with positive mass.
    it = thresholds_.end() - 1;
    while (it != thresholds_.begin() && *(it - 1) == *it) --it;
  }
  return static_cast<std::size_t>(it - thresholds_.begin());
}

}  // namespace massart
