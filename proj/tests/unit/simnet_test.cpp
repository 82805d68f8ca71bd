#include "rti/simnet.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "rti/error.hpp"
#include "rti/protocol.hpp"

#ifndef RTI_SCENARIO_DIR
#error "RTI_SCENARIO_DIR must be defined"
#endif

namespace rti {
namespace {

using P = ProtocolKind;
using A = AdversaryStrategy;

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Io;
}

const std::filesystem::path kScenarios = RTI_SCENARIO_DIR;

TEST(ScenarioMatrix, MatchesExpectedTable) {
    const auto rows = scenario_matrix();
    ASSERT_EQ(rows.size(), 10u);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.matches()) << to_string(r.protocol) << "/" << to_string(r.strategy)
                                 << (r.proxy_registered ? "" : " (unregistered)") << ": expected " << r.expected
                                 << " got " << r.observed;
    }
}

TEST(ScenarioMatrix, StableAcrossSeeds) {
    for (std::uint64_t seed : {1u, 77u, 9001u}) {
        for (const auto& r : scenario_matrix(seed)) {
            EXPECT_TRUE(r.matches()) << "seed " << seed << " " << to_string(r.protocol) << "/"
                                     << to_string(r.strategy) << " got " << r.observed;
        }
    }
}

TEST(RunScenario, BenignFvRtiTranscript) {
    const auto o = run_scenario(standard_scenario(P::FvRti, A::None, 5));
    EXPECT_TRUE(o.decision);
    ASSERT_EQ(o.transcript.size(), 2u);
    EXPECT_EQ(o.transcript[0].sender, "vrf");
    EXPECT_EQ(o.transcript[0].receiver, "dev-a");
    EXPECT_EQ(o.transcript[0].frame[0], 0x01);
    EXPECT_EQ(o.transcript[1].sender, "dev-a");
    EXPECT_EQ(o.transcript[1].frame[0], 0x02);
    ASSERT_EQ(o.touches.size(), 1u);
    EXPECT_EQ(o.touches[0].node, "dev-a");
}

TEST(RunScenario, CuckooRelaysThroughCompromisedOs) {
    const auto o = run_scenario(standard_scenario(P::FvRti, A::CuckooRelay, 5));
    EXPECT_FALSE(o.decision);
    ASSERT_EQ(o.transcript.size(), 4u);
    EXPECT_EQ(o.transcript[1].sender, "dev-a");
    EXPECT_EQ(o.transcript[1].receiver, "dev-star");
    EXPECT_TRUE(decode_response(decode_frame(o.transcript[2].frame)).aborted);
    ASSERT_EQ(o.touches.size(), 1u);
    EXPECT_EQ(o.touches[0].node, "dev-star");
}

TEST(RunScenario, AccompliceChallengerReplaysToAccompliceDevice) {
    const auto o = run_scenario(standard_scenario(P::FvRti, A::CuckooWithAccompliceChallenger, 5));
    EXPECT_FALSE(o.decision);
    ASSERT_EQ(o.transcript.size(), 6u);
    EXPECT_EQ(o.transcript[2].sender, "chal-star");
    EXPECT_EQ(o.transcript[2].receiver, "dev-star");
    EXPECT_EQ(o.transcript[2].frame, o.transcript[0].frame);
}

TEST(RunScenario, ClonedBiometricDefeatsFvRti) {
    const auto o = run_scenario(standard_scenario(P::FvRti, A::ClonedBiometric, 5));
    EXPECT_TRUE(o.decision);
    EXPECT_EQ(o.touches.at(0).node, "dev-star");
}

TEST(RunScenario, UnregisteredProxyRejected) {
    auto s = standard_scenario(P::ProxyRti, A::None, 5);
    s.proxy_registered = false;
    const auto o = run_scenario(s);
    EXPECT_FALSE(o.decision);
    ASSERT_TRUE(o.rejection.has_value());
    EXPECT_NE(o.rejection->find("unidentified"), std::string::npos);
}

TEST(RunScenario, Deterministic) {
    for (auto st : {A::None, A::EvilTwinRelay, A::CuckooWithAccompliceChallenger}) {
        const auto s = standard_scenario(P::FvRti, st, 11);
        const auto a = run_scenario(s);
        const auto b = run_scenario(s);
        EXPECT_EQ(serialize_transcript(a.transcript), serialize_transcript(b.transcript));
        EXPECT_EQ(format_outcome(a), format_outcome(b));
    }
}

TEST(RunScenario, RoutingAuditIsClean) {
    for (auto p : {P::FvRti, P::Naive, P::ProxyRti}) {
        for (auto st : {A::None, A::EvilTwinRelay, A::CuckooRelay, A::CuckooWithAccompliceChallenger,
                        A::ClonedBiometric}) {
            const auto s = standard_scenario(p, st, 3);
            const auto o = run_scenario(s);
            EXPECT_TRUE(audit_routing(s, o).empty()) << to_string(p) << "/" << to_string(st);
        }
    }
}

TEST(RunScenario, AuditFlagsLeakedSample) {
    const auto s = standard_scenario(P::ProxyRti, A::None, 3);
    auto o = run_scenario(s);
    ASSERT_FALSE(o.touches.empty());
    const std::string leak = serialize_template(o.touches[0].sample);
    o.transcript.push_back({"proxy-a", "vrf", Bytes(leak.begin(), leak.end())});
    EXPECT_TRUE(audit_routing(s, o).empty());
    o.transcript.push_back({"dev-b", "ghost", Bytes(leak.begin(), leak.end())});
    EXPECT_EQ(audit_routing(s, o).size(), 1u);
}

TEST(Validation, InconsistentTopologiesRejected) {
    auto cuckoo = standard_scenario(P::FvRti, A::CuckooRelay, 1);
    cuckoo.nodes[1].compromised_os = false;
    EXPECT_EQ(kind_of([&] { run_scenario(cuckoo); }), ErrorKind::Validation);

    auto challenger = standard_scenario(P::FvRti, A::CuckooWithAccompliceChallenger, 1);
    challenger.nodes.back().has_rot = true;
    EXPECT_EQ(kind_of([&] { run_scenario(challenger); }), ErrorKind::Validation);

    auto no_star = standard_scenario(P::FvRti, A::EvilTwinRelay, 1);
    no_star.nodes.pop_back();
    EXPECT_EQ(kind_of([&] { run_scenario(no_star); }), ErrorKind::Validation);

    auto cloned = standard_scenario(P::FvRti, A::ClonedBiometric, 1);
    cloned.user.cloned_available = false;
    EXPECT_EQ(kind_of([&] { run_scenario(cloned); }), ErrorKind::Validation);

    auto two_vrf = standard_scenario(P::FvRti, A::None, 1);
    two_vrf.nodes.push_back({"vrf2", NodeKind::Verifier});
    EXPECT_EQ(kind_of([&] { run_scenario(two_vrf); }), ErrorKind::Validation);

    auto unwired = standard_scenario(P::FvRti, A::None, 1);
    unwired.nodes[1].sensor_wired_to_rot = false;
    EXPECT_EQ(kind_of([&] { run_scenario(unwired); }), ErrorKind::Validation);

    auto self_proxy = standard_scenario(P::ProxyRti, A::None, 1);
    self_proxy.proxy = self_proxy.target;
    EXPECT_EQ(kind_of([&] { run_scenario(self_proxy); }), ErrorKind::Validation);
}

TEST(Replay, ReproducesDecisions) {
    for (auto p : {P::FvRti, P::Naive, P::ProxyRti}) {
        for (auto st : {A::None, A::EvilTwinRelay, A::CuckooRelay}) {
            const auto s = standard_scenario(p, st, 21);
            const auto o = run_scenario(s);
            const auto r = replay_transcript(s, parse_transcript(serialize_transcript(o.transcript)));
            EXPECT_EQ(r.decision, o.decision) << to_string(p) << "/" << to_string(st);
            EXPECT_EQ(r.rejection.has_value(), o.rejection.has_value());
        }
    }
}

TEST(Replay, CuckooReplayDecidesZero) {
    const auto s = standard_scenario(P::FvRti, A::CuckooRelay, 8);
    EXPECT_FALSE(replay_transcript(s, run_scenario(s).transcript).decision);
}

TEST(Replay, DroppedFramesGiveErrorOrZero) {
    const auto s = standard_scenario(P::FvRti, A::None, 9);
    const auto o = run_scenario(s);
    ASSERT_TRUE(o.decision);

    auto no_response = o.transcript;
    no_response.pop_back();
    EXPECT_FALSE(replay_transcript(s, no_response).decision);

    auto no_request = o.transcript;
    no_request.erase(no_request.begin());
    EXPECT_EQ(kind_of([&] { replay_transcript(s, no_request); }), ErrorKind::Replay);
}

TEST(Replay, TamperedVerifierFrameIsReplayError) {
    const auto s = standard_scenario(P::FvRti, A::None, 9);
    auto t = run_scenario(s).transcript;
    t[0].frame.back() ^= 1;
    EXPECT_EQ(kind_of([&] { replay_transcript(s, t); }), ErrorKind::Replay);
    const auto other_seed = standard_scenario(P::FvRti, A::None, 10);
    EXPECT_EQ(kind_of([&] { replay_transcript(other_seed, run_scenario(s).transcript); }), ErrorKind::Replay);
}

TEST(ScenarioFile, BundledScenariosGiveExpectedDecisions) {
    const std::pair<const char*, const char*> expected[] = {
        {"benign.scn", "decision=1"},
        {"evil_twin.scn", "decision=0"},
        {"naive_evil_twin.scn", "decision=1"},
        {"cuckoo.scn", "decision=0"},
        {"cuckoo_challenger.scn", "decision=0"},
        {"cloned.scn", "decision=1"},
        {"proxy.scn", "decision=1"},
        {"proxy_unregistered.scn", "rejection=unidentified proxy"},
    };
    for (const auto& [file, want] : expected) {
        const auto o = run_scenario(load_scenario(kScenarios / file));
        EXPECT_NE(format_outcome(o).find(want), std::string::npos) << file << "\n" << format_outcome(o);
    }
}

TEST(ScenarioFile, ParsesSectionsAndDefaults) {
    const auto s = parse_scenario(R"(# comment
[scenario]
protocol = naive
strategy = evil-twin
seed = 0x2a

[node vrf]
kind = verifier
[node dev-a]
kind = device
has_rot = true
sensor_wired_to_rot = true
[node dev-star]
kind = accomplice-device
has_rot = true
sensor_wired_to_rot = yes
[human]
sigma_xy = 2.5
drop_rate = 0
)");
    EXPECT_EQ(s.protocol, P::Naive);
    EXPECT_EQ(s.strategy, A::EvilTwinRelay);
    EXPECT_EQ(s.seed, 42u);
    EXPECT_EQ(s.target, "dev-a");
    EXPECT_EQ(s.nodes.size(), 3u);
    EXPECT_DOUBLE_EQ(s.user.noise.sigma_xy, 2.5);
    EXPECT_DOUBLE_EQ(s.user.noise.sigma_theta, 5.0);
    EXPECT_TRUE(run_scenario(s).decision);
}

TEST(ScenarioFile, MalformedFilesRejected) {
    const char* bad[] = {
        "[node vrf]\nkind = verifier\n",
        "[scenario]\nprotocol = quantum\n",
        "[scenario]\nseed = twelve\n",
        "[scenario]\n[scenario]\n",
        "[scenario]\ncolour = blue\n",
        "seed = 1\n",
        "[scenario\n",
        "[scenario]\n[node vrf]\nkind = verifier\n[node vrf]\n",
        "[scenario]\n[node vrf]\nkind = verifier\nhas_rot = maybe\n",
        "[scenario]\nstrategy = cuckoo\n[node vrf]\nkind = verifier\n[node dev-a]\nhas_rot = 1\n"
        "sensor_wired_to_rot = 1\n",
    };
    for (const char* text : bad) {
        EXPECT_EQ(kind_of([&] { parse_scenario(text); }), ErrorKind::Validation) << text;
    }
}

TEST(Transcript, MalformedLinesRejected) {
    EXPECT_EQ(kind_of([] { parse_transcript("vrf dev-a\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_transcript("vrf dev-a 0z\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_transcript("vrf dev-a 00 11\n"); }), ErrorKind::Parse);
    EXPECT_TRUE(parse_transcript("").empty());
}

}  // namespace
}  // namespace rti
