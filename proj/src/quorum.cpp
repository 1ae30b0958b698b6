#include "loglessraft/quorum.hpp"

namespace loglessraft {

bool is_quorum(MemberSet q, MemberSet m) {
    return q.subset_of(m) && 2 * q.size() > m.size();
}

std::vector<MemberSet> quorums(MemberSet m) {
    if (m.empty()) throw std::invalid_argument("quorums of an empty member set");
    std::vector<MemberSet> out;
    // Walk every subset of m in ascending mask order.
    const std::uint32_t mm = m.mask();
    for (std::uint32_t s = 0;; s = ((s | ~mm) + 1) & mm) {
        MemberSet q(s);
        if (2 * q.size() > m.size()) out.push_back(q);
        if (s == mm) break;
    }
    return out;
}

bool quorums_overlap(MemberSet m1, MemberSet m2) {
    if (m1.empty() || m2.empty())
        throw std::invalid_argument("quorums_overlap on an empty member set");
    for (MemberSet q1 : quorums(m1))
        for (MemberSet q2 : quorums(m2))
            if (q1.intersect(q2).empty()) return false;
    return true;
}

}  // namespace loglessraft
