#include "primeprod/prime_table.hpp"

#include <algorithm>
#include <cmath>

namespace primeprod {

PrimeTable PrimeTable::sieve(std::uint64_t limit, std::uint64_t cap) {
  if (limit < 2) limit = 2;
  if (limit > cap) throw CapacityError("sieve limit exceeds cap");
  PrimeTable t;
  t.limit_ = limit;
  t.bits_.resize(limit + 1, true);
  t.bits_.reset(0);
  t.bits_.reset(1);
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (!t.bits_.test(p)) continue;
    for (std::uint64_t m = p * p; m <= limit; m += p) t.bits_.reset(m);
  }
  t.primes_.reserve(limit > 16 ? static_cast<std::size_t>(limit / (std::max<double>(std::log(double(limit)), 1.0) - 1.1)) : 8);
  for (auto p = t.bits_.find_first(); p != boost::dynamic_bitset<>::npos; p = t.bits_.find_next(p))
    t.primes_.push_back(static_cast<std::uint32_t>(p));
  return t;
}

std::size_t PrimeTable::count_leq(std::uint64_t n) const {
  require(n);
  return std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin();
}

std::size_t PrimeTable::upper_index(std::uint64_t n) const {
  return std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin();
}

}  // namespace primeprod
