#pragma once

#include <random>

#include "msa/syntax.hpp"

namespace msa::testing_util {

inline Signature standard_signature() { return parse_signature("p: 0\nq: 0 1\nr: 1\n"); }

inline Term random_term(std::mt19937_64& rng, const Signature& sig, int depth, Index max_index) {
  RandomTermOptions opts;
  opts.depth = depth;
  opts.max_index = max_index;
  return msa::random_term(rng, sig, opts);
}

}  // namespace msa::testing_util
