#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace primeprod {

// A residue mod q lives in [0, q).  All moduli handled here fit in 32 bits,
// so products are safe in 64-bit intermediates.
using Residue = std::uint32_t;

using Complex = std::complex<double>;

// Thrown when an input exceeds a configured resource cap rather than
// violating a mathematical precondition (which throws std::domain_error).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact nonnegative rational, used for densities |E_k|/phi(q) etc.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }
  bool operator==(const Rational&) const = default;
};

// Compensated accumulation.  Character sums run over up to 1e8 terms of unit
// modulus; plain doubles would eat the 1e-9 tolerance budget.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double get() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

class KahanComplexSum {
 public:
  void add(Complex z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  Complex get() const { return {re_.get(), im_.get()}; }

 private:
  KahanSum re_, im_;
};

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace primeprod
