#include "support.hpp"

#include "edgereconf/error.hpp"
#include "edgereconf/evaluator.hpp"
#include "edgereconf/reconfig.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace edgereconf;
using edgereconf::fixtures::input_node;
using edgereconf::fixtures::menu;
using edgereconf::fixtures::reference_topology;
using edgereconf::fixtures::request;

namespace {

constexpr std::size_t kNas = 0;
constexpr std::size_t kMri = 1;

struct World {
    std::shared_ptr<const Topology> topo;
    AppCatalog cat = reference_catalog();
    SystemState state;
    std::size_t next_id = 0;

    explicit World(std::shared_ptr<const Topology> t = reference_topology()) : topo(t), state(t) {}

    const Placement& put(std::size_t input, std::size_t app, ConstraintMenu m) {
        const auto r = place(request(next_id, input_node(*topo, input), cat[app], app, std::move(m)), state);
        EXPECT_TRUE(std::holds_alternative<Placement>(r));
        return state.placement(RequestId(next_id++));
    }
    SiteKind kind(RequestId id) const { return topo->site(state.placement(id).site).kind; }
};

// One chain; the cloud GPU holds only 2 GB at the same per-GB rate as a
// 16 GB server.
std::shared_ptr<const Topology> scarce_cloud() {
    ScenarioConfig c = reference_scenario();
    c.hardware.cloud.devices = {{DeviceKind::GPU, 1, 2.0, 12500.0}};
    return std::make_shared<const Topology>(build_topology(TopologyShape{1, 1, 1, 1, Attachment::Block}, c.hardware));
}

const ConstraintMenu kPriceBC = menu(10, 8500, Objective::MinimizeResponseTime, "bC");

} // namespace

TEST(Reconfig, CarrierToCloudSingleApp) {
    World w;
    const Placement& p = w.put(0, kNas, kPriceBC);
    ASSERT_EQ(w.kind(p.request), SiteKind::CarrierEdge);
    const std::vector<RequestId> targets{p.request};

    const ReconfigModel rm = build_model(w.state, targets);
    std::set<SiteKind> kinds;
    for (const auto& c : rm.choices[0]) {
        kinds.insert(w.topo->site(c.site).kind);
    }
    EXPECT_EQ(kinds, (std::set<SiteKind>{SiteKind::CarrierEdge, SiteKind::Cloud}));

    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    EXPECT_EQ(plan.s_before, 2.0);
    EXPECT_EQ(plan.moved_count(), 1u);
    EXPECT_NEAR(plan.s_after, 1.9545, 0.001);
    EXPECT_NEAR(plan.s_after, 7.4 / 6.6 + 7010.0 / 8412.5, 1e-12);
    EXPECT_EQ(w.topo->site(plan.apps[0].to.site).kind, SiteKind::Cloud);
    EXPECT_TRUE(plan.optimal);
}

TEST(Reconfig, CurrentPlacementCostsExactlyTwo) {
    World w;
    Xoshiro256 rng(3);
    const auto reqs = generate_requests(w.cat, w.topo->sites_of_kind(SiteKind::InputNode), 200, MixMode::Quota, rng);
    for (const auto& r : reqs) {
        place(r, w.state);
    }
    const auto targets = select_targets(w.state, 200);
    const ReconfigModel rm = build_model(w.state, targets);
    validate(rm.model);
    for (const auto& app : rm.model.apps) {
        std::size_t current = 0;
        for (const auto& c : app) {
            if (c.is_current) {
                ++current;
                EXPECT_EQ(c.cost, 2.0);
            }
            EXPECT_GT(c.cost, 0.0);
        }
        EXPECT_EQ(current, 1u);
    }
    for (double r : rm.model.residual) {
        EXPECT_GE(r, 0.0);
    }
}

TEST(Reconfig, CandidatesRespectOriginalBoundsOnly) {
    World w;
    // Time bound only: the price is free to rise, so user edge is admissible.
    const Placement& p = w.put(0, kNas, menu(7, {}, Objective::MinimizePrice, "B"));
    ASSERT_EQ(w.kind(p.request), SiteKind::CarrierEdge);
    const std::vector<RequestId> targets{p.request};
    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    EXPECT_EQ(w.topo->site(plan.apps[0].to.site).kind, SiteKind::UserEdge);
    EXPECT_NEAR(plan.s_after, 5.8 / 6.6 + 9375.0 / 8412.5, 1e-12);
}

TEST(Reconfig, NoCheaperCandidateMeansNoMoves) {
    World w;
    const Placement& p = w.put(0, kNas, menu(6, {}, Objective::MinimizePrice, "A"));
    const std::vector<RequestId> targets{p.request};
    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    EXPECT_EQ(plan.s_after, plan.s_before);
    EXPECT_EQ(plan.moved_count(), 0u);
    const ReconfigReport rep = apply_if_beneficial(w.state, plan, 0.01);
    EXPECT_FALSE(rep.applied);
    EXPECT_FALSE(rep.mean_moved_term);
}

TEST(Reconfig, MriQCloudToCarrier) {
    World w;
    const Placement& p = w.put(0, kMri, menu(8, {}, Objective::MinimizePrice, "Y"));
    ASSERT_EQ(w.kind(p.request), SiteKind::Cloud);
    const std::vector<RequestId> targets{p.request};
    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    EXPECT_NEAR(plan.s_after, 3.2 / 4.4 + 15300.0 / 12380.0, 1e-12);
    EXPECT_NEAR(plan.s_after, 1.9631, 0.001);
}

TEST(Reconfig, ContentionLimitsMoves) {
    World w(scarce_cloud());
    std::vector<RequestId> targets;
    for (int i = 0; i < 4; ++i) {
        targets.push_back(w.put(0, kNas, kPriceBC).request);
        ASSERT_EQ(w.kind(targets.back()), SiteKind::CarrierEdge);
    }
    const ReconfigModel rm = build_model(w.state, targets);
    const auto bf = brute_force(rm.model);
    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    EXPECT_EQ(plan.moved_count(), 2u);
    EXPECT_EQ(plan.s_after, bf.objective);
    EXPECT_NEAR(plan.s_after, 4.0 + 2 * (7.4 / 6.6 + 7010.0 / 8412.5), 1e-9);
}

TEST(Reconfig, TrialIsPure) {
    World w;
    Xoshiro256 rng(21);
    for (const auto& r : generate_requests(w.cat, w.topo->sites_of_kind(SiteKind::InputNode), 400, MixMode::Quota,
                                           rng)) {
        place(r, w.state);
    }
    const auto digest = w.state.digest();
    const auto version = w.state.version();
    const auto plan = trial_reconfigure(w.state, select_targets(w.state, 400));
    EXPECT_EQ(w.state.digest(), digest);
    EXPECT_EQ(w.state.version(), version);
    EXPECT_LE(plan.s_after, plan.s_before);
}

TEST(Reconfig, ApplyMovesAndRebaselines) {
    World w;
    Xoshiro256 rng(8);
    for (const auto& r : generate_requests(w.cat, w.topo->sites_of_kind(SiteKind::InputNode), 400, MixMode::Quota,
                                           rng)) {
        place(r, w.state);
    }
    const auto targets = select_targets(w.state, 200);
    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    ASSERT_GT(plan.moved_count(), 0u);
    const ReconfigReport rep = apply_if_beneficial(w.state, plan, 0.01);
    ASSERT_TRUE(rep.applied);
    EXPECT_EQ(rep.moved, plan.moved_count());
    ASSERT_TRUE(rep.mean_moved_term);
    EXPECT_LT(*rep.mean_moved_term, 2.0);
    EXPECT_TRUE(audit(w.state).ok());

    double chained = 0;
    for (const AppChange& a : plan.apps) {
        const Placement& now = w.state.placement(a.request);
        EXPECT_EQ(now.device, a.to.device);
        EXPECT_EQ(now.outcome, a.to.outcome);
        chained += satisfaction_term(a.from.outcome, now.outcome);
    }
    EXPECT_NEAR(chained, plan.s_after, 1e-9);

    const ReconfigPlan again = trial_reconfigure(w.state, targets);
    EXPECT_EQ(again.s_before, 2.0 * static_cast<double>(targets.size()));
    EXPECT_LE(again.s_after, again.s_before);
}

TEST(Reconfig, StalePlanRejected) {
    World w;
    const Placement& p = w.put(0, kNas, kPriceBC);
    const std::vector<RequestId> targets{p.request};
    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    w.put(1, kNas, kPriceBC);
    const auto digest = w.state.digest();
    EXPECT_THROW(apply_if_beneficial(w.state, plan, 0.01), StalePlanError);
    EXPECT_EQ(w.state.digest(), digest);
}

TEST(Reconfig, EpsilonGatesApplication) {
    World w;
    const Placement& p = w.put(0, kNas, kPriceBC);
    const std::vector<RequestId> targets{p.request};
    const ReconfigPlan plan = trial_reconfigure(w.state, targets);
    const auto digest = w.state.digest();
    const ReconfigReport rep = apply_if_beneficial(w.state, plan, 0.05);
    EXPECT_FALSE(rep.applied);
    EXPECT_EQ(w.state.digest(), digest);
    EXPECT_TRUE(apply_if_beneficial(w.state, plan, 0.045).applied);
}

TEST(Reconfig, SelectTargetsByRecency) {
    World w;
    Xoshiro256 rng(2);
    for (const auto& r : generate_requests(w.cat, w.topo->sites_of_kind(SiteKind::InputNode), 40, MixMode::Quota,
                                           rng)) {
        place(r, w.state);
    }
    const auto& order = w.state.arrival_order();
    const auto last10 = select_targets(w.state, 10);
    ASSERT_EQ(last10.size(), 10u);
    EXPECT_TRUE(std::equal(last10.begin(), last10.end(), order.end() - 10));
    EXPECT_EQ(select_targets(w.state, 1000).size(), order.size());
}
