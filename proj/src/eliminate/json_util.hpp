#pragma once

#include <string>

#include <gmpxx.h>

#include "json.hpp"

namespace pillai::eliminate {

inline nlohmann::json int_json(const mpz_class& n) { return n.get_str(); }
inline mpz_class int_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  return mpz_class(j.get<std::string>());
}

inline nlohmann::json rat_json(const mpq_class& q) { return q.get_str(); }
inline mpq_class rat_from_json(const nlohmann::json& j) {
  mpq_class q(j.get<std::string>());
  q.canonicalize();
  return q;
}

inline mpz_class floor_int(const mpq_class& q) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

}  // namespace pillai::eliminate
