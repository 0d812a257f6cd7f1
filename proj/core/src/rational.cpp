#include "tangotower/rational.hpp"

#include <cctype>

#include "tangotower/errors.hpp"

namespace tango {

Rat make_rat(long n, long d) {
  if (d == 0) throw InputError("rational with zero denominator");
  Rat q(n, d);
  q.canonicalize();
  return q;
}

Rat rat_from_string(std::string_view text) {
  if (text.empty()) throw InputError("empty rational literal");
  // strict shape check: -?digits(/digits)?
  std::size_t i = 0;
  if (text[i] == '-') ++i;
  bool saw_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i)
    saw_digit = true;
  if (!saw_digit)
    throw InputError("malformed rational literal: '" + std::string(text) + "'");
  if (i < text.size()) {
    if (text[i] != '/')
      throw InputError("malformed rational literal: '" + std::string(text) + "'");
    ++i;
    bool saw_den = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i)
      saw_den = true;
    if (!saw_den || i != text.size())
      throw InputError("malformed rational literal: '" + std::string(text) + "'");
  }
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0)
    throw InputError("malformed rational literal: '" + std::string(text) + "'");
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw InputError("rational with zero denominator: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) { return q.get_str(); }

bool rat_is_integer(const Rat& q) {
  return mpz_cmp_ui(mpq_denref(q.get_mpq_t()), 1) == 0;
}

bool rat_divisible(const Rat& q, long k) {
  if (k == 0) return false;
  if (!rat_is_integer(q)) return false;
  return mpz_divisible_ui_p(mpq_numref(q.get_mpq_t()),
                            static_cast<unsigned long>(k > 0 ? k : -k)) != 0;
}

Rat rat_floor(const Rat& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
  return Rat(f);
}

Rat rat_ceil(const Rat& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
  return Rat(c);
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace tango
