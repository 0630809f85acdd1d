#include "shortdot/params.hpp"

#include <string>

#include "shortdot/errors.hpp"

namespace shortdot {

CodeParams validate_params(std::size_t P, std::size_t K, std::size_t M, std::size_t n_raw) {
  if (P == 0) throw ValidationError("P must be positive");
  if (M == 0) throw ValidationError("M must be positive");
  if (n_raw == 0) throw ValidationError("input dimension must be positive");
  if (K < M) {
    throw ValidationError("K (" + std::to_string(K) + ") must be >= M (" + std::to_string(M) + ")");
  }
  if (K > P) {
    throw ValidationError("K (" + std::to_string(K) + ") must be <= P (" + std::to_string(P) + ")");
  }
  CodeParams params{P, K, M, ((n_raw + P - 1) / P) * P, n_raw};
  return params;
}

}  // namespace shortdot
