#include <set>

#include "helpers.hpp"
#include "loglessraft/quorum.hpp"

using namespace loglessraft;
using loglessraft::testing::ms;

namespace {

// Independent oracle: enumerate every subset of m by walking ids, count
// cardinalities directly.
std::set<std::uint32_t> quorum_masks_oracle(MemberSet m) {
    std::vector<ServerId> ids = m.ids();
    std::set<std::uint32_t> out;
    for (std::uint32_t pick = 0; pick < (1u << ids.size()); ++pick) {
        std::uint32_t mask = 0, size = 0;
        for (std::uint32_t b = 0; b < ids.size(); ++b)
            if ((pick >> b) & 1) { mask |= 1u << ids[b]; ++size; }
        if (2 * size > ids.size()) out.insert(mask);
    }
    return out;
}

bool quorums_overlap_oracle(MemberSet m1, MemberSet m2) {
    for (std::uint32_t q1 : quorum_masks_oracle(m1))
        for (std::uint32_t q2 : quorum_masks_oracle(m2))
            if ((q1 & q2) == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("quorums of small member sets") {
    CHECK(quorums(ms({0})) == std::vector<MemberSet>{ms({0})});
    CHECK(quorums(ms({0, 1})) == std::vector<MemberSet>{ms({0, 1})});

    auto qs = quorums(ms({0, 1, 2}));
    std::set<std::uint32_t> got;
    for (MemberSet q : qs) got.insert(q.mask());
    CHECK(got == quorum_masks_oracle(ms({0, 1, 2})));
    CHECK(got == std::set<std::uint32_t>{ms({0, 1}).mask(), ms({0, 2}).mask(),
                                         ms({1, 2}).mask(), ms({0, 1, 2}).mask()});

    CHECK_THROWS_AS(quorums(MemberSet()), std::invalid_argument);
}

TEST_CASE("quorums agree with brute-force enumeration up to 5 members") {
    for (std::uint32_t mask = 1; mask < (1u << 5); ++mask) {
        MemberSet m(mask);
        std::set<std::uint32_t> got;
        for (MemberSet q : quorums(m)) got.insert(q.mask());
        CHECK(got == quorum_masks_oracle(m));
    }
}

TEST_CASE("quorum overlap") {
    CHECK(quorums_overlap(ms({0, 1, 2}), ms({0, 1, 2})));
    CHECK(quorums_overlap(ms({0, 1, 2}), ms({0, 1, 2, 3})));
    // Witness pair: {1,2} from the first, {3,4} from the second.
    CHECK_FALSE(quorums_overlap(ms({0, 1, 2}), ms({0, 3, 4})));
    CHECK_THROWS_AS(quorums_overlap(MemberSet(), ms({0})), std::invalid_argument);
}

TEST_CASE("quorum overlap agrees with pair enumeration up to 5 members") {
    for (std::uint32_t m1 = 1; m1 < (1u << 5); m1 += 3)
        for (std::uint32_t m2 = 1; m2 < (1u << 5); m2 += 2)
            CHECK(quorums_overlap(MemberSet(m1), MemberSet(m2)) ==
                  quorums_overlap_oracle(MemberSet(m1), MemberSet(m2)));
}

TEST_CASE("single-member changes preserve overlap") {
    // Adding or removing one server keeps all quorums overlapping; the
    // experiment's reconfiguration controller relies on this.
    for (std::uint32_t mask = 1; mask < (1u << 5); ++mask) {
        MemberSet m(mask);
        for (ServerId id = 0; id < 6; ++id) {
            MemberSet grown = m;
            grown.add(id);
            CHECK(quorums_overlap(m, grown));
            if (m.contains(id) && m.size() > 1) {
                MemberSet shrunk = m;
                shrunk.remove(id);
                CHECK(quorums_overlap(m, shrunk));
            }
        }
    }
}
