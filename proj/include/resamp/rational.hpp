#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace resamp {

// All probability mass, matrix entries and bound values are exact rationals.
// Floating point is confined to Monte Carlo summary statistics.
using Rat = mpq_class;

// Parses "num/den" or a plain integer. Throws std::invalid_argument on
// malformed input or a zero denominator.
Rat rat_parse(const std::string& s);

// Formats canonically: "num/den", or just "num" when the denominator is 1.
// rat_parse(rat_str(x)) == x exactly.
std::string rat_str(const Rat& x);

double rat_double(const Rat& x);

Rat rat_pow(const Rat& base, unsigned long e);

Rat factorial(unsigned n);

// Falling factorial n! / (n-k)!.
Rat falling(unsigned n, unsigned k);

// Rational upper bound on exp(x) for x >= 0, via the Taylor series plus a
// geometric tail majorant. `terms` grows internally until the tail converges.
Rat exp_upper(const Rat& x, unsigned terms = 24);

// Rational bracket for Euler's number: lower = partial sum, upper adds the
// standard tail bound 1/(K!*K).
Rat euler_lower(unsigned terms = 20);
Rat euler_upper(unsigned terms = 20);

// Decides exactly whether e * q <= bound (q >= 0). Terminates because e is
// irrational, so equality never occurs for q > 0.
bool euler_times_leq(const Rat& q, const Rat& bound);

}  // namespace resamp
