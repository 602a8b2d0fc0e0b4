#pragma once

#include <cstdint>

namespace hevdb {

// Thread-local instrumentation used by tests and the bench harness to pin
// operation counts (hoisting, automorphism budget, update locality).
struct OpCounters {
  uint64_t automorphisms = 0;  // nontrivial homomorphic automorphisms
  uint64_t mod_ups = 0;
  uint64_t mod_downs = 0;
  uint64_t butterfly_adds = 0;  // element additions inside butterfly networks
  uint64_t recached_blocks = 0;

  void reset() { *this = OpCounters{}; }
};

OpCounters& op_counters();

}  // namespace hevdb
