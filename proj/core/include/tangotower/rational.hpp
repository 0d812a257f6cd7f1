#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tango {

/// Exact rational coefficient type. All divisor-class arithmetic is carried
/// out in arbitrary precision; no floating-point value ever enters a class.
using Rat = mpq_class;

/// Builds a canonical rational n/d (lowest terms, positive denominator).
Rat make_rat(long n, long d = 1);

/// Parses "n", "-n" or "n/d" (base 10). Canonicalizes. Throws InputError on
/// anything else, including a zero denominator.
Rat rat_from_string(std::string_view text);

/// Canonical lowest-terms rendering: "5", "-7/3", "0".
std::string rat_to_string(const Rat& q);

bool rat_is_integer(const Rat& q);

/// True when q is an integer divisible by k (k != 0).
bool rat_divisible(const Rat& q, long k);

/// floor(q) as an exact integer rational.
Rat rat_floor(const Rat& q);

/// ceil(q) as an exact integer rational.
Rat rat_ceil(const Rat& q);

/// floor(a/b) for machine integers, b > 0.
long floor_div(long a, long b);

}  // namespace tango
