#pragma once

#include "loglessraft/types.hpp"

namespace loglessraft {

// All quorums of a member set: every subset holding a strict majority
// (2*|q| > |m|). Returned in ascending bitmask order. Throws
// std::invalid_argument for an empty member set.
std::vector<MemberSet> quorums(MemberSet m);

// True iff `q` is a quorum of `m`.
bool is_quorum(MemberSet q, MemberSet m);

// True iff every quorum of m1 intersects every quorum of m2, checked by
// enumerating all quorum pairs. Throws std::invalid_argument if either set
// is empty.
bool quorums_overlap(MemberSet m1, MemberSet m2);

}  // namespace loglessraft
