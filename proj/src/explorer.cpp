#include "loglessraft/explorer.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>

#include "loglessraft/rng.hpp"

namespace loglessraft {

namespace {

constexpr std::uint32_t kMaxKeyWords = 4;

std::uint32_t bits_for(std::uint64_t max_value) {
    std::uint32_t b = 0;
    while (max_value > 0) { ++b; max_value >>= 1; }
    return b;
}

// Lossless fixed-width packing of a GlobalState into a few 64-bit words.
// Field widths are derived from the exploration bounds, so two states are
// equal iff their encodings are. Per server: term, role, member mask,
// version, config term, then (full mode) log length and entry terms;
// finally the committed set as an (index, term) bitmap.
class StateCodec {
public:
    StateCodec(std::uint32_t n, std::uint32_t max_term, std::uint32_t max_log_len,
               std::uint32_t max_config_version, bool logless)
        : n_(n),
          logless_(logless),
          max_log_len_(logless ? 0 : max_log_len),
          max_term_(max_term),
          term_bits_(bits_for(max_term)),
          version_bits_(bits_for(max_config_version)),
          len_bits_(bits_for(max_log_len)) {
        std::uint32_t per_server = term_bits_ + 1 + n_ + version_bits_ + term_bits_;
        if (!logless_) per_server += len_bits_ + max_log_len_ * term_bits_;
        total_bits_ = n_ * per_server + (logless_ ? 0 : max_log_len_ * max_term_);
        words_ = (total_bits_ + 63) / 64;
        if (words_ > kMaxKeyWords)
            throw std::invalid_argument("bounds too large for the packed state encoding");
    }

    std::uint32_t words() const { return words_; }

    void encode(const GlobalState& g, std::uint64_t* out) const {
        static const std::vector<ServerId> identity = [] {
            std::vector<ServerId> v(kMaxUniverse);
            for (std::uint32_t i = 0; i < kMaxUniverse; ++i) v[i] = i;
            return v;
        }();
        encode_permuted(g, identity.data(), nullptr, out);
    }

    // Encode the relabelled state directly: output slot k describes input
    // server inv_perm[k]; member masks go through mask_relabel (identity
    // when null).
    void encode_permuted(const GlobalState& g, const ServerId* inv_perm,
                         const std::uint16_t* mask_relabel, std::uint64_t* out) const {
        for (std::uint32_t w = 0; w < words_; ++w) out[w] = 0;
        std::uint32_t pos = 0;
        auto put = [&](std::uint64_t v, std::uint32_t bits) {
            assert(bits == 64 || v < (1ull << bits));
            if (bits == 0) return;
            out[pos / 64] |= v << (pos % 64);
            const std::uint32_t spill = pos % 64 + bits;
            if (spill > 64) out[pos / 64 + 1] |= v >> (64 - pos % 64);
            pos += bits;
        };
        for (std::uint32_t k = 0; k < n_; ++k) {
            const ServerState& s = g.servers[inv_perm[k]];
            std::uint32_t members = s.config.members.mask();
            if (mask_relabel) members = mask_relabel[members];
            put(s.term, term_bits_);
            put(s.role == Role::Primary ? 1 : 0, 1);
            put(members, n_);
            put(s.config.version, version_bits_);
            put(s.config.term, term_bits_);
            if (!logless_) {
                put(s.log.size(), len_bits_);
                for (std::uint32_t e = 0; e < max_log_len_; ++e)
                    put(e < s.log.size() ? s.log[e] : 0, term_bits_);
            }
        }
        if (!logless_) {
            std::uint64_t commit_bits = 0;
            for (const auto& c : g.committed) {
                assert(c.index >= 1 && c.index <= max_log_len_ && c.term >= 1 &&
                       c.term <= max_term_);
                commit_bits |= 1ull << ((c.index - 1) * max_term_ + (c.term - 1));
            }
            put(commit_bits, max_log_len_ * max_term_);
        }
    }

    GlobalState decode(const std::uint64_t* in) const {
        GlobalState g;
        g.servers.resize(n_);
        std::uint32_t pos = 0;
        auto get = [&](std::uint32_t bits) -> std::uint64_t {
            if (bits == 0) return 0;
            std::uint64_t v = in[pos / 64] >> (pos % 64);
            const std::uint32_t spill = pos % 64 + bits;
            if (spill > 64) v |= in[pos / 64 + 1] << (64 - pos % 64);
            pos += bits;
            return bits == 64 ? v : v & ((1ull << bits) - 1);
        };
        for (std::uint32_t k = 0; k < n_; ++k) {
            ServerState& s = g.servers[k];
            s.term = static_cast<std::uint32_t>(get(term_bits_));
            s.role = get(1) ? Role::Primary : Role::Secondary;
            s.config.members = MemberSet(static_cast<std::uint32_t>(get(n_)));
            s.config.version = static_cast<std::uint32_t>(get(version_bits_));
            s.config.term = static_cast<std::uint32_t>(get(term_bits_));
            if (!logless_) {
                const std::uint32_t len = static_cast<std::uint32_t>(get(len_bits_));
                s.log.reserve(len);
                for (std::uint32_t e = 0; e < max_log_len_; ++e) {
                    const std::uint32_t t = static_cast<std::uint32_t>(get(term_bits_));
                    if (e < len) s.log.push_back(t);
                }
            }
        }
        if (!logless_) {
            std::uint64_t commit_bits = get(max_log_len_ * max_term_);
            for (std::uint32_t b = 0; commit_bits != 0; ++b, commit_bits >>= 1)
                if (commit_bits & 1)
                    g.committed.push_back(CommittedEntry{b / max_term_ + 1, b % max_term_ + 1});
            std::sort(g.committed.begin(), g.committed.end());
        }
        return g;
    }

private:
    std::uint32_t n_;
    bool logless_;
    std::uint32_t max_log_len_;
    std::uint32_t max_term_;
    std::uint32_t term_bits_;
    std::uint32_t version_bits_;
    std::uint32_t len_bits_;
    std::uint32_t total_bits_ = 0;
    std::uint32_t words_ = 0;
};

// Exact visited set: packed keys stored contiguously, indexed through an
// open-addressing table. Insertion order doubles as the BFS order.
class StateStore {
public:
    explicit StateStore(std::uint32_t words) : words_(words) { rehash(1u << 16); }

    std::pair<std::uint32_t, bool> insert(const std::uint64_t* key) {
        if ((count_ + 1) * 3 > capacity_ * 2) rehash(capacity_ * 2);
        std::size_t slot = probe(key);
        if (slots_[slot] != 0) return {slots_[slot] - 1, false};
        keys_.insert(keys_.end(), key, key + words_);
        slots_[slot] = ++count_;
        return {count_ - 1, true};
    }

    const std::uint64_t* key(std::uint32_t idx) const { return keys_.data() + std::size_t(idx) * words_; }
    std::uint32_t size() const { return count_; }

private:
    static std::uint64_t hash(const std::uint64_t* key, std::uint32_t words) {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::uint32_t w = 0; w < words; ++w) {
            std::uint64_t z = key[w] + 0xbf58476d1ce4e5b9ull * (w + 1);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            h ^= z ^ (z >> 31);
            h *= 0xff51afd7ed558ccdull;
        }
        return h ^ (h >> 33);
    }

    std::size_t probe(const std::uint64_t* key) const {
        std::size_t slot = hash(key, words_) & (capacity_ - 1);
        while (slots_[slot] != 0) {
            const std::uint64_t* existing = keys_.data() + std::size_t(slots_[slot] - 1) * words_;
            if (std::memcmp(existing, key, words_ * sizeof(std::uint64_t)) == 0) return slot;
            slot = (slot + 1) & (capacity_ - 1);
        }
        return slot;
    }

    void rehash(std::size_t capacity) {
        capacity_ = capacity;
        slots_.assign(capacity_, 0);
        for (std::uint32_t i = 0; i < count_; ++i) {
            const std::uint64_t* k = keys_.data() + std::size_t(i) * words_;
            std::size_t slot = hash(k, words_) & (capacity_ - 1);
            while (slots_[slot] != 0) slot = (slot + 1) & (capacity_ - 1);
            slots_[slot] = i + 1;
        }
    }

    std::uint32_t words_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> slots_;
    std::size_t capacity_ = 0;
    std::uint32_t count_ = 0;
};

struct PermutationTables {
    // perms[p] maps old id -> new id; inv[p] the reverse. masks[p] relabels
    // any member-set bitmask under perms[p].
    std::vector<std::vector<ServerId>> perms;
    std::vector<std::vector<ServerId>> inv;
    std::vector<std::vector<std::uint16_t>> masks;

    explicit PermutationTables(std::uint32_t n) {
        std::vector<ServerId> p(n);
        for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
        do {
            std::vector<ServerId> ip(n);
            for (std::uint32_t i = 0; i < n; ++i) ip[p[i]] = i;
            std::vector<std::uint16_t> mt(1u << n);
            for (std::uint32_t m = 0; m < (1u << n); ++m) {
                std::uint16_t r = 0;
                for (std::uint32_t b = 0; b < n; ++b)
                    if ((m >> b) & 1) r |= std::uint16_t(1u << p[b]);
                mt[m] = r;
            }
            perms.push_back(p);
            inv.push_back(std::move(ip));
            masks.push_back(std::move(mt));
        } while (std::next_permutation(p.begin(), p.end()));
    }
};

bool key_less(const std::uint64_t* a, const std::uint64_t* b, std::uint32_t words) {
    for (std::uint32_t w = 0; w < words; ++w)
        if (a[w] != b[w]) return a[w] < b[w];
    return false;
}

// Packed action for the parent link: kind | actor | peer | member mask.
std::uint32_t pack_action(const ActionDescriptor& d) {
    return (std::uint32_t(d.kind) << 28) | (d.actor << 24) | (d.peer << 20) |
           d.members.mask();
}

ActionDescriptor unpack_action(std::uint32_t v) {
    ActionDescriptor d;
    d.kind = static_cast<ActionKind>(v >> 28);
    d.actor = (v >> 24) & 0xf;
    d.peer = (v >> 20) & 0xf;
    d.members = MemberSet(v & 0xfffff);
    return d;
}

struct InvariantSelection {
    std::vector<std::string> state_names;
    std::vector<std::string> transition_names;
};

InvariantSelection resolve_invariants(const std::vector<std::string>& requested) {
    InvariantSelection sel;
    auto is_state = [](const std::string& n) {
        const auto& all = state_invariant_names();
        return std::find(all.begin(), all.end(), n) != all.end();
    };
    auto is_transition = [](const std::string& n) {
        const auto& all = transition_invariant_names();
        return std::find(all.begin(), all.end(), n) != all.end();
    };
    for (const auto& name : requested) {
        if (name == "all") {
            sel.state_names = state_invariant_names();
            sel.transition_names = transition_invariant_names();
            return sel;
        }
        if (is_state(name))
            sel.state_names.push_back(name);
        else if (is_transition(name))
            sel.transition_names.push_back(name);
        else
            throw std::invalid_argument("unknown invariant: " + name);
    }
    return sel;
}

}  // namespace

GlobalState permute_state(const GlobalState& g, const std::vector<ServerId>& perm) {
    GlobalState out;
    out.servers.resize(g.servers.size());
    for (std::uint32_t i = 0; i < g.servers.size(); ++i) {
        ServerState s = g.servers[i];
        MemberSet relabelled;
        for (ServerId id : s.config.members.ids()) relabelled.add(perm[id]);
        s.config.members = relabelled;
        out.servers[perm[i]] = std::move(s);
    }
    out.committed = g.committed;
    return out;
}

ActionDescriptor permute_action(const ActionDescriptor& d, const std::vector<ServerId>& perm) {
    ActionDescriptor out = d;
    out.actor = perm[d.actor];
    switch (d.kind) {
        case ActionKind::SendConfig:
        case ActionKind::UpdateTerms:
        case ActionKind::GetEntries:
        case ActionKind::RollbackEntries:
            out.peer = perm[d.peer];
            break;
        case ActionKind::Reconfig:
        case ActionKind::BecomeLeader:
        case ActionKind::CommitEntry: {
            MemberSet relabelled;
            for (ServerId id : d.members.ids()) relabelled.add(perm[id]);
            out.members = relabelled;
            break;
        }
        case ActionKind::ClientRequest:
            break;
    }
    return out;
}

GlobalState canonicalize(const GlobalState& g) {
    const std::uint32_t n = g.server_count();
    if (n == 0) return g;
    // Derive encoding widths from the state itself; they are invariant
    // under relabelling, so the orbit minimum is well defined.
    std::uint32_t max_term = 0, max_len = 0, max_version = 1;
    for (const auto& s : g.servers) {
        max_term = std::max({max_term, s.term, s.config.term});
        max_len = std::max<std::uint32_t>(max_len, static_cast<std::uint32_t>(s.log.size()));
        max_version = std::max(max_version, s.config.version);
        for (std::uint32_t t : s.log) max_term = std::max(max_term, t);
    }
    for (const auto& c : g.committed) {
        max_term = std::max(max_term, c.term);
        max_len = std::max(max_len, c.index);
    }
    StateCodec codec(n, max_term, max_len, max_version, false);
    PermutationTables tables(n);
    std::uint64_t best[kMaxKeyWords], cand[kMaxKeyWords];
    std::size_t best_perm = 0;
    for (std::size_t p = 0; p < tables.perms.size(); ++p) {
        codec.encode_permuted(g, tables.inv[p].data(), tables.masks[p].data(), cand);
        if (p == 0 || key_less(cand, best, codec.words())) {
            std::memcpy(best, cand, codec.words() * sizeof(std::uint64_t));
            best_perm = p;
        }
    }
    return permute_state(g, tables.perms[best_perm]);
}

namespace {

// The BFS successor walk. Shares the action semantics with
// enabled_transitions but hoists the argument-independent Reconfig guards
// out of the member-set loop; the two enumerations are differentially
// tested for equality.
template <typename Fn>
void for_each_successor(const GlobalState& g, const Bounds& bounds, const Semantics& sem,
                        GlobalState& scratch, Fn&& emit) {
    const std::uint32_t n = g.server_count();
    const std::uint32_t universe_mask = MemberSet::universe(n).mask();

    auto attempt = [&](const ActionDescriptor& d) {
        scratch = g;
        if (apply_action_inplace(scratch, d, sem) == Guard::Ok) emit(d, scratch);
    };

    for (ServerId i = 0; i < n; ++i) {
        if (g.at(i).role != Role::Primary) continue;
        if (g.at(i).config.version + 1 > bounds.max_config_version) continue;
        for (std::uint32_t m = 1; m <= universe_mask; ++m) {
            Guard guard = reconfig_enabled(g, i, MemberSet(m), sem);
            // Q1/Q2/P1 ignore the new member set; their failure kills every
            // candidate for this actor.
            if (guard == Guard::Q1Failed || guard == Guard::Q2Failed || guard == Guard::P1Failed)
                break;
            if (guard != Guard::Ok) continue;
            scratch = g;
            apply_reconfig_inplace(scratch, i, MemberSet(m), sem);
            emit(ActionDescriptor{ActionKind::Reconfig, i, 0, MemberSet(m)}, scratch);
        }
    }

    for (ServerId i = 0; i < n; ++i)
        for (ServerId j = 0; j < n; ++j)
            if (i != j) attempt({ActionKind::SendConfig, i, j, {}});

    for (ServerId i = 0; i < n; ++i) {
        if (g.at(i).term + 1 > bounds.max_term) continue;
        for (MemberSet q : quorums(g.at(i).config.members))
            attempt({ActionKind::BecomeLeader, i, 0, q});
    }

    for (ServerId i = 0; i < n; ++i)
        for (ServerId j = 0; j < n; ++j)
            if (i != j) attempt({ActionKind::UpdateTerms, i, j, {}});

    if (sem.logless) return;

    for (ServerId i = 0; i < n; ++i) {
        if (g.at(i).log.size() + 1 > bounds.max_log_len) continue;
        attempt({ActionKind::ClientRequest, i, 0, {}});
    }

    for (ServerId i = 0; i < n; ++i) {
        if (g.at(i).log.size() + 1 > bounds.max_log_len) continue;
        for (ServerId j = 0; j < n; ++j)
            if (i != j) attempt({ActionKind::GetEntries, i, j, {}});
    }

    for (ServerId i = 0; i < n; ++i)
        for (ServerId j = 0; j < n; ++j)
            if (i != j) attempt({ActionKind::RollbackEntries, i, j, {}});

    for (ServerId i = 0; i < n; ++i)
        for (MemberSet q : quorums(g.at(i).config.members))
            attempt({ActionKind::CommitEntry, i, 0, q});
}

}  // namespace

ExplorationReport explore(ProtocolMode mode, const Bounds& bounds,
                          const std::vector<std::string>& invariants, bool symmetry,
                          const ExploreOptions& options) {
    bounds.validate();
    Semantics sem = options.mutations;
    sem.logless = (mode == ProtocolMode::LoglessOnly);

    const InvariantSelection sel = resolve_invariants(invariants);
    const std::uint32_t n = bounds.server_count;
    StateCodec codec(n, bounds.max_term, bounds.max_log_len, bounds.max_config_version,
                     sem.logless);
    std::optional<PermutationTables> tables;
    if (symmetry) tables.emplace(n);

    StateStore store(codec.words());
    std::vector<std::uint32_t> parent;     // parent state index
    std::vector<std::uint32_t> via;        // packed action from the parent
    std::vector<std::uint64_t> state_checks(sel.state_names.size(), 0);
    std::vector<std::uint64_t> edge_checks(sel.transition_names.size(), 0);

    ExplorationReport report;

    std::uint64_t keybuf[kMaxKeyWords], candbuf[kMaxKeyWords];
    auto canonical_key = [&](const GlobalState& g, std::uint64_t* out) {
        if (!symmetry) {
            codec.encode(g, out);
            return;
        }
        for (std::size_t p = 0; p < tables->perms.size(); ++p) {
            codec.encode_permuted(g, tables->inv[p].data(), tables->masks[p].data(), candbuf);
            if (p == 0 || key_less(candbuf, out, codec.words()))
                std::memcpy(out, candbuf, codec.words() * sizeof(std::uint64_t));
        }
    };

    // Rebuild the concrete action sequence leading to `idx`. Under
    // symmetry each stored action fires from the stored (canonical) parent
    // representative, so actions are relabelled step by step to follow the
    // concrete replay.
    auto build_trace = [&](std::uint32_t idx, const ActionDescriptor* extra) {
        std::vector<std::uint32_t> chain;
        for (std::uint32_t k = idx; k != 0; k = parent[k]) chain.push_back(k);
        std::reverse(chain.begin(), chain.end());

        Trace trace;
        trace.semantics = sem;
        trace.init = codec.decode(store.key(0));
        GlobalState current = trace.init;
        for (std::uint32_t k : chain) {
            ActionDescriptor act = unpack_action(via[k]);
            if (symmetry) {
                // The stored action fires from decode(key[parent]); find
                // the relabelling onto the concrete state reached so far.
                GlobalState canon_parent = codec.decode(store.key(parent[k]));
                for (const auto& p : tables->perms) {
                    if (permute_state(canon_parent, p) == current) {
                        act = permute_action(act, p);
                        break;
                    }
                }
            }
            Guard guard = apply_action_inplace(current, act, sem);
            assert(guard == Guard::Ok);
            (void)guard;
            trace.steps.push_back(act);
        }
        if (extra) trace.steps.push_back(*extra);
        return trace;
    };

    auto check_state = [&](const GlobalState& g, std::uint32_t idx) -> bool {
        for (std::size_t k = 0; k < sel.state_names.size(); ++k) {
            ++state_checks[k];
            InvariantReport r = check_state_invariant(sel.state_names[k], g);
            if (!r.holds) {
                report.all_hold = false;
                report.violated_invariant = r.name;
                report.counterexample = build_trace(idx, nullptr);
                return false;
            }
        }
        return true;
    };

    auto check_edge = [&](const GlobalState& pre, const GlobalState& post,
                          const ActionDescriptor& act, std::uint32_t pre_idx) -> bool {
        for (std::size_t k = 0; k < sel.transition_names.size(); ++k) {
            ++edge_checks[k];
            InvariantReport r = check_transition_invariant(sel.transition_names[k], pre, post);
            if (!r.holds) {
                report.all_hold = false;
                report.violated_invariant = r.name;
                report.counterexample = build_trace(pre_idx, &act);
                return false;
            }
        }
        return true;
    };

    auto finalize = [&]() {
        if (options.collect_states) {
            report.states.reserve(store.size());
            for (std::uint32_t i = 0; i < store.size(); ++i)
                report.states.push_back(codec.decode(store.key(i)));
        }
        for (std::size_t k = 0; k < sel.state_names.size(); ++k)
            report.per_invariant.emplace_back(sel.state_names[k], state_checks[k]);
        for (std::size_t k = 0; k < sel.transition_names.size(); ++k)
            report.per_invariant.emplace_back(sel.transition_names[k], edge_checks[k]);
        report.distinct_states = store.size();
        if (report.counterexample)
            report.max_depth = static_cast<std::uint32_t>(report.counterexample->steps.size());
    };

    // Seed with the initial state.
    GlobalState init = initial_state(n, bounds.init_members());
    canonical_key(init, keybuf);
    store.insert(keybuf);
    parent.push_back(0);
    via.push_back(0);
    if (!check_state(codec.decode(store.key(0)), 0)) {
        finalize();
        return report;
    }

    GlobalState scratch;
    std::uint32_t cursor = 0;
    std::uint32_t depth = 0;
    std::uint32_t layer_end = 1;
    bool stop = false;

    while (cursor < store.size() && !stop) {
        if (cursor == layer_end) {
            ++depth;
            layer_end = store.size();
        }
        const std::uint32_t idx = cursor++;
        GlobalState g = codec.decode(store.key(idx));

        for_each_successor(g, bounds, sem, scratch,
                           [&](const ActionDescriptor& act, const GlobalState& next) {
            if (stop) return;
            if (!check_edge(g, next, act, idx)) { stop = true; return; }
            canonical_key(next, keybuf);
            auto [succ_idx, inserted] = store.insert(keybuf);
            if (!inserted) return;
            parent.push_back(idx);
            via.push_back(pack_action(act));
            if (!check_state(next, succ_idx)) { stop = true; return; }
        });
    }

    if (report.all_hold) report.max_depth = depth;
    finalize();
    return report;
}

ReplayResult replay(const Trace& trace) {
    ReplayResult r;
    r.final = trace.init;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        Guard guard = apply_action_inplace(r.final, trace.steps[k], trace.semantics);
        if (guard != Guard::Ok) {
            r.valid = false;
            r.failed_step = static_cast<std::uint32_t>(k + 1);
            r.reason = guard;
            return r;
        }
    }
    r.valid = true;
    return r;
}

namespace {

GlobalState project_logless(const GlobalState& g) {
    GlobalState out = g;
    for (auto& s : out.servers) s.log.clear();
    out.committed.clear();
    return out;
}

bool is_logless_action(ActionKind k) {
    return k == ActionKind::Reconfig || k == ActionKind::SendConfig ||
           k == ActionKind::BecomeLeader || k == ActionKind::UpdateTerms;
}

}  // namespace

RefinementResult project_and_check_refinement(const Trace& trace) {
    RefinementResult res;
    Semantics logless_sem;
    logless_sem.logless = true;

    GlobalState abstract = project_logless(trace.init);
    // The projected initial state must be a valid logless initial state:
    // uniform config (m, 1, 0), all secondaries at term 0.
    for (const auto& s : abstract.servers) {
        if (s.term != 0 || s.role != Role::Secondary || s.config.version != 1 ||
            s.config.term != 0 || s.config != abstract.servers[0].config) {
            res.refines = false;
            res.failed_step = 0;
            res.reason = "projected initial state is not a logless initial state";
            return res;
        }
    }

    GlobalState concrete = trace.init;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const ActionDescriptor& act = trace.steps[k];
        Guard guard = apply_action_inplace(concrete, act, trace.semantics);
        if (guard != Guard::Ok) {
            res.refines = false;
            res.failed_step = static_cast<std::uint32_t>(k + 1);
            res.reason = std::string("trace is not replayable: ") + to_string(guard);
            return res;
        }
        if (is_logless_action(act.kind)) {
            Guard lg = apply_action_inplace(abstract, act, logless_sem);
            if (lg != Guard::Ok) {
                res.refines = false;
                res.failed_step = static_cast<std::uint32_t>(k + 1);
                res.reason = std::string("projected step not enabled in the logless machine: ") +
                             to_string(lg);
                return res;
            }
        }
        // Log actions project to stutters; either way the projections must
        // agree after the step.
        if (project_logless(concrete) != abstract) {
            res.refines = false;
            res.failed_step = static_cast<std::uint32_t>(k + 1);
            res.reason = "projected effect diverges from the logless transition";
            return res;
        }
    }
    res.refines = true;
    return res;
}

Trace random_trace(const Bounds& bounds, std::uint32_t max_len, std::uint64_t seed,
                   const Semantics& sem) {
    bounds.validate();
    SplitMix64 rng(seed);
    Trace trace;
    trace.semantics = sem;
    trace.init = initial_state(bounds.server_count, bounds.init_members());
    GlobalState g = trace.init;
    for (std::uint32_t k = 0; k < max_len; ++k) {
        auto enabled = enabled_transitions(g, bounds, sem);
        if (enabled.empty()) break;
        const ActionDescriptor& d = enabled[rng.bounded(0, enabled.size() - 1)];
        apply_action_inplace(g, d, sem);
        trace.steps.push_back(d);
    }
    return trace;
}

}  // namespace loglessraft
