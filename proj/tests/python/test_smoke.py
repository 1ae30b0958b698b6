"""Smoke tests for the python bindings: every major entry point gets one
quick exercise against values the C++ suites verify in depth."""

import loglessraft as llr


def test_quorums_and_overlap():
    qs = {tuple(q) for q in llr.quorums([0, 1, 2])}
    assert qs == {(0, 1), (0, 2), (1, 2), (0, 1, 2)}
    assert llr.quorums_overlap([0, 1, 2], [0, 1, 2, 3])
    assert not llr.quorums_overlap([0, 1, 2], [0, 3, 4])


def test_config_ordering():
    older = llr.Config([0], version=1, term=1)
    newer = llr.Config([0, 1], version=5, term=1)
    assert llr.compare_configs(older, newer) == llr.ConfigOrdering.Older
    # Term dominates version.
    assert (
        llr.compare_configs(llr.Config([0], version=1, term=2), newer)
        == llr.ConfigOrdering.Newer
    )


def test_initial_state_and_transitions():
    g = llr.initial_state(3)
    assert all(s.term == 0 and s.role == llr.Role.Secondary for s in g.servers)

    elected = llr.apply_become_leader(g, 0, [0, 1])
    assert elected.ok
    assert elected.state.servers[0].role == llr.Role.Primary
    assert elected.state.servers[0].term == 1
    assert elected.state.servers[0].config.term == 1

    refused = llr.apply_reconfig(g, 0, [0, 1, 2])
    assert refused.guard == llr.Guard.NotPrimary
    assert refused.state == g  # guard failures leave the state untouched


def test_invariant_checkers():
    g = llr.initial_state(3)
    assert llr.election_safety(g).holds
    suite = llr.state_lemma_suite(g)
    assert len(suite) == 13 and all(r.holds for r in suite)
    assert len(llr.state_invariant_names()) == 16

    bad = llr.initial_state(2)
    bad.servers[0].role = llr.Role.Primary
    bad.servers[1].role = llr.Role.Primary
    report = llr.election_safety(bad)
    assert not report.holds and list(report.witnesses[0].servers) == [0, 1]


def test_explore_small_bounds():
    bounds = llr.Bounds(servers=2, max_term=1, max_log_len=0, max_config_version=1)
    report = llr.explore(llr.ProtocolMode.Full, bounds, collect_states=True)
    assert report.all_hold
    assert report.distinct_states == 5  # init, each leader, each propagated config
    assert len(report.states) == 5


def test_mutation_finds_violation_and_replays():
    bounds = llr.Bounds(servers=3, max_term=3, max_log_len=1, max_config_version=3)
    report = llr.explore(
        llr.ProtocolMode.Full,
        bounds,
        invariants=["election-safety"],
        mutations=["drop-q2"],
    )
    assert not report.all_hold
    assert report.violated_invariant == "election-safety"
    replayed = llr.replay(report.counterexample)
    assert replayed.valid
    assert not llr.election_safety(replayed.final).holds


def test_trace_json_roundtrip_and_refinement():
    bounds = llr.Bounds(servers=3, max_term=2, max_log_len=2, max_config_version=2)
    trace = llr.random_trace(bounds, 15, seed=4)
    assert llr.replay(trace).valid
    assert llr.project_and_check_refinement(trace).refines
    again = llr.Trace.from_json(trace.to_json())
    assert again.to_json() == trace.to_json()


def test_simulation_determinism():
    cfg = llr.SimConfig()
    cfg.seed = 42
    cfg.universe = 3
    cfg.duration_ms = 3000
    a = llr.run_simulation(cfg)
    b = llr.run_simulation(cfg)
    assert a.all_hold and b.all_hold
    assert a.stats.elections_won == 1
    assert a.stats.events_processed == b.stats.events_processed
    assert llr.replay(a.trace).valid


def test_experiment_quick():
    params = llr.ExperimentParams()
    params.total_ms = 9000  # one degraded phase
    params.seed = 2
    logless = llr.run_availability_experiment(llr.Backend.Logless, params)
    assert logless.all_hold
    assert len(logless.stats.phases) == 1
    assert logless.stats.phases[0].recovery_ms is not None

    gated = llr.run_availability_experiment(llr.Backend.RaftOplog, params)
    assert gated.all_hold
    assert gated.stats.phases[0].timeouts > logless.stats.phases[0].timeouts
