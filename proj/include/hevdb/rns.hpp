#pragma once

#include "hevdb/poly.hpp"

namespace hevdb {

// Transient representation of a polynomial mod q*p as its (q, p) residues.
// Only used inside hoisted key-switch accumulation; never serialized.
struct RnsPoly {
  Poly q_part;  // mod q
  Poly p_part;  // mod p
};

// Lift the centered representative of a (mod q) into the (q, p) base.
RnsPoly mod_up(const Poly& a, const RingParams& pp);

// round(x / p) mod q for x given in the (q, p) base.
Poly mod_down(const RnsPoly& a, const RingParams& pp);

}  // namespace hevdb
