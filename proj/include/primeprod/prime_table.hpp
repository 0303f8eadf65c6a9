#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <vector>

#include "primeprod/types.hpp"

namespace primeprod {

// Plain Eratosthenes table.  Immutable after construction and shared by all
// modules that sum over primes.
class PrimeTable {
 public:
  static PrimeTable sieve(std::uint64_t limit, std::uint64_t cap = kDefaultCap);

  std::uint64_t limit() const { return limit_; }
  bool is_prime(std::uint64_t n) const { return n <= limit_ && bits_.test(n); }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  // number of primes <= n (n must be <= limit)
  std::size_t count_leq(std::uint64_t n) const;
  // index of first prime > n
  std::size_t upper_index(std::uint64_t n) const;

  void require(std::uint64_t n) const {
    if (n > limit_) throw CapacityError("prime table sieved only up to " + std::to_string(limit_));
  }

  static constexpr std::uint64_t kDefaultCap = 200'000'000;

 private:
  std::uint64_t limit_ = 0;
  boost::dynamic_bitset<> bits_;
  std::vector<std::uint32_t> primes_;
};

}  // namespace primeprod
