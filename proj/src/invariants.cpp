#include "loglessraft/invariants.hpp"

#include <functional>

namespace loglessraft {

bool is_deactivated(const GlobalState& g, const Config& c) {
    if (c.members.empty()) throw std::invalid_argument("config with empty member set");
    for (MemberSet q : quorums(c.members)) {
        bool has_newer = false;
        for (ServerId n : q.ids()) {
            if (config_newer(g.at(n).config, c)) { has_newer = true; break; }
        }
        if (!has_newer) return false;
    }
    return true;
}

MemberSet active_config_set(const GlobalState& g) {
    MemberSet out;
    for (ServerId s = 0; s < g.server_count(); ++s)
        if (!is_deactivated(g, g.at(s).config)) out.add(s);
    return out;
}

namespace {

InvariantReport ok(std::string name) { return InvariantReport{std::move(name), true, {}}; }

InvariantReport violated(std::string name, Witness w) {
    return InvariantReport{std::move(name), false, {std::move(w)}};
}

// --- The thirteen state lemmas, each a standalone checker -------------------

InvariantReport primary_term_equals_config_term(const GlobalState& g) {
    const std::string name = "primary-term-equals-config-term";
    for (ServerId i = 0; i < g.server_count(); ++i) {
        const auto& s = g.at(i);
        if (s.role == Role::Primary && s.config.term != s.term)
            return violated(name, {{i}, {}, {}, {}, "primary's config term differs from its term"});
    }
    return ok(name);
}

InvariantReport config_version_term_unique(const GlobalState& g) {
    const std::string name = "config-version-term-unique";
    for (ServerId i = 0; i < g.server_count(); ++i)
        for (ServerId j = 0; j < g.server_count(); ++j) {
            const Config& a = g.at(i).config;
            const Config& b = g.at(j).config;
            if (a.version == b.version && a.term == b.term && a.members != b.members)
                return violated(name, {{i, j}, {}, {}, {},
                                       "same (version, term) with different member sets"});
        }
    return ok(name);
}

InvariantReport primary_newest_config_of_term(const GlobalState& g) {
    const std::string name = "primary-newest-config-of-term";
    for (ServerId i = 0; i < g.server_count(); ++i)
        for (ServerId j = 0; j < g.server_count(); ++j) {
            const auto& p = g.at(i);
            const auto& o = g.at(j);
            if (p.role == Role::Primary && o.config.term == p.term &&
                !(o.config.version <= p.config.version))
                return violated(name, {{i, j}, {}, {}, {},
                                       "another server holds a newer config in the primary's term"});
        }
    return ok(name);
}

InvariantReport active_configs_overlap(const GlobalState& g) {
    const std::string name = "active-configs-overlap";
    MemberSet active = active_config_set(g);
    for (ServerId s : active.ids())
        for (ServerId t : active.ids())
            if (!quorums_overlap(g.at(s).config.members, g.at(t).config.members))
                return violated(name, {{s, t}, {}, {}, {},
                                       "two active configs with non-overlapping quorums"});
    return ok(name);
}

InvariantReport active_configs_safe_at_terms(const GlobalState& g) {
    const std::string name = "active-configs-safe-at-terms";
    MemberSet active = active_config_set(g);
    for (ServerId s = 0; s < g.server_count(); ++s)
        for (ServerId t : active.ids())
            for (MemberSet q : quorums(g.at(t).config.members)) {
                bool found = false;
                for (ServerId n : q.ids())
                    if (g.at(n).term >= g.at(s).config.term) { found = true; break; }
                if (!found)
                    return violated(name, {{s, t}, {}, {}, q,
                                           "quorum of an active config has no server at the config term"});
            }
    return ok(name);
}

InvariantReport primary_term_gte_log_term(const GlobalState& g) {
    const std::string name = "primary-term-gte-log-term";
    for (ServerId s = 0; s < g.server_count(); ++s) {
        const auto& st = g.at(s);
        if (st.role != Role::Primary) continue;
        for (std::uint32_t ind = 1; ind <= st.log.size(); ++ind)
            if (!(st.term >= st.log[ind - 1]))
                return violated(name, {{s}, {}, ind, {}, "log entry term above the primary's term"});
    }
    return ok(name);
}

InvariantReport log_terms_monotonic(const GlobalState& g) {
    const std::string name = "log-terms-monotonic";
    for (ServerId s = 0; s < g.server_count(); ++s) {
        const Log& log = g.at(s).log;
        for (std::uint32_t i = 1; i + 1 <= log.size(); ++i)
            if (!(log[i - 1] <= log[i]))
                return violated(name, {{s}, {}, i + 1, {}, "entry terms decrease along the log"});
    }
    return ok(name);
}

InvariantReport uniform_log_entries_in_term(const GlobalState& g) {
    const std::string name = "uniform-log-entries-in-term";
    for (ServerId i = 0; i < g.server_count(); ++i)
        for (ServerId j = 0; j < g.server_count(); ++j) {
            const Log& li = g.at(i).log;
            const Log& lj = g.at(j).log;
            for (std::uint32_t ii = 1; ii <= li.size(); ++ii)
                for (std::uint32_t jj = 1; jj <= lj.size(); ++jj)
                    if (jj < ii && li[ii - 1] == lj[jj - 1] && li[jj - 1] != li[ii - 1])
                        return violated(name, {{i, j}, {}, ii, {},
                                               "same-term entries with a gap in between"});
        }
    return ok(name);
}

InvariantReport log_entry_term_implies_config_in_term(const GlobalState& g) {
    const std::string name = "log-entry-term-implies-config-in-term";
    for (ServerId s = 0; s < g.server_count(); ++s) {
        const Log& log = g.at(s).log;
        for (std::uint32_t ind = 1; ind <= log.size(); ++ind) {
            const std::uint32_t t = log[ind - 1];
            bool found = false;
            for (ServerId j = 0; j < g.server_count(); ++j)
                if (g.at(j).config.term >= t) { found = true; break; }
            if (!found)
                return violated(name, {{s}, {}, ind, {}, "no config term covers this entry's term"});
        }
    }
    return ok(name);
}

InvariantReport primary_has_entries_it_created(const GlobalState& g) {
    const std::string name = "primary-has-entries-it-created";
    for (ServerId s = 0; s < g.server_count(); ++s) {
        const auto& p = g.at(s);
        if (p.role != Role::Primary) continue;
        for (ServerId j = 0; j < g.server_count(); ++j) {
            const Log& lj = g.at(j).log;
            for (std::uint32_t ind = 1; ind <= lj.size(); ++ind)
                if (lj[ind - 1] == p.term && !in_log(p, ind, p.term))
                    return violated(name, {{s, j}, {}, ind, {},
                                           "entry created in the primary's term is missing from it"});
        }
    }
    return ok(name);
}

InvariantReport newer_logs_have_committed(const GlobalState& g) {
    const std::string name = "newer-logs-have-committed";
    for (ServerId s = 0; s < g.server_count(); ++s) {
        const Log& log = g.at(s).log;
        for (const auto& c : g.committed)
            for (std::uint32_t ind = 1; ind <= log.size(); ++ind)
                if (c.term < log[ind - 1] && !in_log(g.at(s), c.index, c.term))
                    return violated(name, {{s}, c, ind, {},
                                           "log has a later-term entry but lacks the committed one"});
    }
    return ok(name);
}

InvariantReport active_configs_overlap_committed(const GlobalState& g) {
    const std::string name = "active-configs-overlap-committed";
    MemberSet active = active_config_set(g);
    for (ServerId s : active.ids())
        for (const auto& c : g.committed)
            for (MemberSet q : quorums(g.at(s).config.members)) {
                bool found = false;
                for (ServerId n : q.ids())
                    if (in_log(g.at(n), c.index, c.term)) { found = true; break; }
                if (!found)
                    return violated(name, {{s}, c, {}, q,
                                           "quorum of an active config misses a committed entry"});
            }
    return ok(name);
}

InvariantReport newer_configs_disable_commits(const GlobalState& g) {
    const std::string name = "newer-configs-disable-commits";
    for (ServerId s = 0; s < g.server_count(); ++s)
        for (ServerId t = 0; t < g.server_count(); ++t) {
            const auto& p = g.at(t);
            if (!(p.role == Role::Primary && p.term < g.at(s).config.term)) continue;
            for (MemberSet q : quorums(p.config.members)) {
                bool found = false;
                for (ServerId n : q.ids())
                    if (g.at(n).term > p.term) { found = true; break; }
                if (!found)
                    return violated(name, {{s, t}, {}, {}, q,
                                           "stale primary still owns a quorum in its own term"});
            }
        }
    return ok(name);
}

using StateChecker = InvariantReport (*)(const GlobalState&);

struct NamedChecker {
    const char* name;
    StateChecker fn;
};

const NamedChecker kStateCheckers[] = {
    {"election-safety", election_safety},
    {"leader-completeness", leader_completeness},
    {"log-matching", log_matching},
    {"primary-term-equals-config-term", primary_term_equals_config_term},
    {"config-version-term-unique", config_version_term_unique},
    {"primary-newest-config-of-term", primary_newest_config_of_term},
    {"active-configs-overlap", active_configs_overlap},
    {"active-configs-safe-at-terms", active_configs_safe_at_terms},
    {"primary-term-gte-log-term", primary_term_gte_log_term},
    {"log-terms-monotonic", log_terms_monotonic},
    {"uniform-log-entries-in-term", uniform_log_entries_in_term},
    {"log-entry-term-implies-config-in-term", log_entry_term_implies_config_in_term},
    {"primary-has-entries-it-created", primary_has_entries_it_created},
    {"newer-logs-have-committed", newer_logs_have_committed},
    {"active-configs-overlap-committed", active_configs_overlap_committed},
    {"newer-configs-disable-commits", newer_configs_disable_commits},
};

}  // namespace

InvariantReport election_safety(const GlobalState& g) {
    const std::string name = "election-safety";
    for (ServerId s = 0; s < g.server_count(); ++s)
        for (ServerId t = s + 1; t < g.server_count(); ++t) {
            const auto& a = g.at(s);
            const auto& b = g.at(t);
            if (a.role == Role::Primary && b.role == Role::Primary && a.term == b.term)
                return violated(name, {{s, t}, {}, {}, {}, "two primaries share a term"});
        }
    return ok(name);
}

InvariantReport leader_completeness(const GlobalState& g) {
    const std::string name = "leader-completeness";
    for (ServerId s = 0; s < g.server_count(); ++s) {
        const auto& p = g.at(s);
        if (p.role != Role::Primary) continue;
        for (const auto& c : g.committed)
            if (c.term < p.term && !in_log(p, c.index, c.term))
                return violated(name, {{s}, c, {}, {}, "primary misses an older committed entry"});
    }
    return ok(name);
}

InvariantReport log_matching(const GlobalState& g) {
    const std::string name = "log-matching";
    for (ServerId s = 0; s < g.server_count(); ++s)
        for (ServerId t = 0; t < g.server_count(); ++t) {
            const Log& a = g.at(s).log;
            const Log& b = g.at(t).log;
            const std::uint32_t common = static_cast<std::uint32_t>(std::min(a.size(), b.size()));
            for (std::uint32_t ind = 1; ind <= common; ++ind) {
                if (a[ind - 1] != b[ind - 1]) continue;
                for (std::uint32_t k = 1; k <= ind; ++k)
                    if (a[k - 1] != b[k - 1])
                        return violated(name, {{s, t}, {}, ind, {},
                                               "equal entry terms with diverging prefixes"});
            }
        }
    return ok(name);
}

std::vector<InvariantReport> state_lemma_suite(const GlobalState& g) {
    std::vector<InvariantReport> out;
    // Skip the three headline properties; the suite is the thirteen lemmas.
    for (std::size_t k = 3; k < std::size(kStateCheckers); ++k)
        out.push_back(kStateCheckers[k].fn(g));
    return out;
}

std::vector<InvariantReport> transition_lemma_suite(const GlobalState& pre,
                                                    const GlobalState& post) {
    std::vector<InvariantReport> out;
    out.push_back(check_transition_invariant("configs-monotonic", pre, post));
    out.push_back(check_transition_invariant("deactivation-stability", pre, post));
    return out;
}

const std::vector<std::string>& state_invariant_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : kStateCheckers) v.emplace_back(c.name);
        return v;
    }();
    return names;
}

const std::vector<std::string>& transition_invariant_names() {
    static const std::vector<std::string> names = {"configs-monotonic", "deactivation-stability"};
    return names;
}

InvariantReport check_state_invariant(const std::string& name, const GlobalState& g) {
    for (const auto& c : kStateCheckers)
        if (name == c.name) return c.fn(g);
    throw std::invalid_argument("unknown invariant: " + name);
}

InvariantReport check_transition_invariant(const std::string& name, const GlobalState& pre,
                                           const GlobalState& post) {
    if (pre.server_count() != post.server_count())
        throw std::invalid_argument("transition over mismatched universes");
    if (name == "configs-monotonic") {
        for (ServerId s = 0; s < pre.server_count(); ++s)
            if (compare_configs(post.at(s).config, pre.at(s).config) == ConfigOrdering::Older)
                return violated(name, {{s}, {}, {}, {}, "config went backwards across a step"});
        return ok(name);
    }
    if (name == "deactivation-stability") {
        // Configs observable in pre (those held by some server) that are
        // deactivated must stay deactivated.
        for (ServerId s = 0; s < pre.server_count(); ++s) {
            const Config& c = pre.at(s).config;
            if (is_deactivated(pre, c) && !is_deactivated(post, c))
                return violated(name, {{s}, {}, {}, {}, "a deactivated config became active"});
        }
        return ok(name);
    }
    throw std::invalid_argument("unknown invariant: " + name);
}

}  // namespace loglessraft
