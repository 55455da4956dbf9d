#include "resamp/rational.hpp"

#include <stdexcept>

namespace resamp {

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rat x;
  if (x.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (x.get_den() == 0)
    throw std::invalid_argument("zero denominator: " + s);
  x.canonicalize();
  return x;
}

std::string rat_str(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

double rat_double(const Rat& x) { return x.get_d(); }

Rat rat_pow(const Rat& base, unsigned long e) {
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

Rat factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rat(f);
}

Rat falling(unsigned n, unsigned k) {
  if (k > n) return 0;
  mpz_class f = 1;
  for (unsigned i = 0; i < k; ++i) f *= (n - i);
  return Rat(f);
}

Rat exp_upper(const Rat& x, unsigned terms) {
  if (x < 0) throw std::invalid_argument("exp_upper needs x >= 0");
  // Grow K until the geometric majorant x/(K+1) < 1/2.
  unsigned k = terms;
  while (Rat(2) * x >= Rat(k + 1)) k *= 2;
  Rat sum = 0, term = 1;
  for (unsigned i = 0; i < k; ++i) {
    sum += term;
    term *= x;
    term /= int(i + 1);
  }
  // term == x^k/k!; tail <= term * 1/(1 - x/(k+1)).
  Rat ratio = x / int(k + 1);
  sum += term / (1 - ratio);
  return sum;
}

Rat euler_lower(unsigned terms) {
  Rat sum = 0, term = 1;
  for (unsigned i = 0; i <= terms; ++i) {
    sum += term;
    term /= int(i + 1);
  }
  return sum;
}

Rat euler_upper(unsigned terms) {
  // sum_{k>K} 1/k! < 1/(K! * K).
  Rat tail = 1 / (factorial(terms) * int(terms));
  return euler_lower(terms) + tail;
}

bool euler_times_leq(const Rat& q, const Rat& bound) {
  if (q == 0) return 0 <= bound;
  if (q < 0) throw std::invalid_argument("euler_times_leq needs q >= 0");
  for (unsigned k = 20;; k *= 2) {
    if (euler_upper(k) * q <= bound) return true;
    if (euler_lower(k) * q > bound) return false;
    if (k > 1u << 20) throw std::runtime_error("euler comparison stalled");
  }
}

}  // namespace resamp
