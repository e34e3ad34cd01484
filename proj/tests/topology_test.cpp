#include "support.hpp"

#include "edgereconf/error.hpp"

#include <gtest/gtest.h>

using namespace edgereconf;
using edgereconf::fixtures::input_node;
using edgereconf::fixtures::reference_topology;
using edgereconf::fixtures::site_of;

namespace {

// Walk parent pointers instead of trusting ancestor_sites.
std::vector<SiteId> walk_up(const Topology& topo, SiteId from) {
    std::vector<SiteId> chain;
    std::optional<SiteId> at = topo.site(from).parent;
    while (at) {
        chain.push_back(*at);
        at = topo.site(*at).parent;
    }
    return chain;
}

} // namespace

TEST(Topology, ReferenceShapeCounts) {
    const auto topo = reference_topology();
    EXPECT_EQ(topo->sites_of_kind(SiteKind::Cloud).size(), 5u);
    EXPECT_EQ(topo->sites_of_kind(SiteKind::CarrierEdge).size(), 20u);
    EXPECT_EQ(topo->sites_of_kind(SiteKind::UserEdge).size(), 60u);
    EXPECT_EQ(topo->sites_of_kind(SiteKind::InputNode).size(), 300u);
    EXPECT_EQ(topo->links().size(), 80u);
    EXPECT_EQ(topo->devices().size(), 5u * 14 + 20u * 7 + 60u * 3);
}

TEST(Topology, DevicesMatchCatalogPerSite) {
    const auto topo = reference_topology();
    for (SiteId s : topo->sites_of_kind(SiteKind::Cloud)) {
        EXPECT_EQ(topo->devices_at(s, DeviceKind::CPU).size(), 8u);
        EXPECT_EQ(topo->devices_at(s, DeviceKind::GPU).size(), 4u);
        EXPECT_EQ(topo->devices_at(s, DeviceKind::FPGA).size(), 2u);
    }
    for (SiteId s : topo->sites_of_kind(SiteKind::CarrierEdge)) {
        EXPECT_EQ(topo->devices_at(s, DeviceKind::GPU).size(), 2u);
        EXPECT_EQ(topo->devices_at(s, DeviceKind::FPGA).size(), 1u);
        EXPECT_DOUBLE_EQ(topo->device(topo->devices_at(s, DeviceKind::GPU)[0]).full_month_cost, 62500.0);
    }
    for (SiteId s : topo->sites_of_kind(SiteKind::UserEdge)) {
        EXPECT_EQ(topo->devices_at(s, DeviceKind::CPU).size(), 2u);
        EXPECT_EQ(topo->devices_at(s, DeviceKind::GPU).size(), 1u);
        EXPECT_TRUE(topo->devices_at(s, DeviceKind::FPGA).empty());
        EXPECT_DOUBLE_EQ(topo->device(topo->devices_at(s, DeviceKind::GPU)[0]).capacity, 4.0);
    }
}

TEST(Topology, AncestorsOfFirstAndLastInput) {
    const auto topo = reference_topology();
    const auto first = topo->ancestor_sites(input_node(*topo, 0));
    EXPECT_EQ(first[0], site_of(*topo, SiteKind::UserEdge, 0));
    EXPECT_EQ(first[1], site_of(*topo, SiteKind::CarrierEdge, 0));
    EXPECT_EQ(first[2], site_of(*topo, SiteKind::Cloud, 0));
    const auto last = topo->ancestor_sites(input_node(*topo, 299));
    EXPECT_EQ(topo->site(last[0]).ordinal, 59u);
    EXPECT_EQ(topo->site(last[1]).ordinal, 19u);
    EXPECT_EQ(topo->site(last[2]).ordinal, 4u);
}

TEST(Topology, AncestorsAgreeWithParentWalkForEveryInput) {
    const auto topo = reference_topology();
    for (SiteId in : topo->sites_of_kind(SiteKind::InputNode)) {
        const auto chain = topo->ancestor_sites(in);
        const auto walked = walk_up(*topo, in);
        ASSERT_EQ(walked.size(), 3u);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_EQ(chain[i], walked[i]);
        }
        const std::size_t ord = topo->site(in).ordinal;
        EXPECT_EQ(topo->site(chain[0]).ordinal, ord / 5);
        EXPECT_EQ(topo->site(chain[1]).ordinal, ord / 15);
        EXPECT_EQ(topo->site(chain[2]).ordinal, ord / 60);
    }
}

TEST(Topology, PathLengthEqualsChainIndex) {
    const auto topo = reference_topology();
    for (SiteId in : topo->sites_of_kind(SiteKind::InputNode)) {
        const auto chain = topo->ancestor_sites(in);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto path = topo->path_links(in, chain[i]);
            ASSERT_EQ(path.size(), i);
            for (std::size_t h = 0; h < path.size(); ++h) {
                EXPECT_EQ(topo->link(path[h]).child, chain[h]);
                EXPECT_EQ(topo->link(path[h]).parent, chain[h + 1]);
            }
        }
    }
}

TEST(Topology, PathBandwidthsAndCosts) {
    const auto topo = reference_topology();
    const SiteId in = input_node(*topo, 17);
    const auto chain = topo->ancestor_sites(in);
    const auto to_cloud = topo->path_links(in, chain[2]);
    EXPECT_DOUBLE_EQ(topo->link(to_cloud[0]).bandwidth_mbps, 10.0);
    EXPECT_DOUBLE_EQ(topo->link(to_cloud[0]).month_cost, 3000.0);
    EXPECT_DOUBLE_EQ(topo->link(to_cloud[1]).bandwidth_mbps, 100.0);
    EXPECT_DOUBLE_EQ(topo->link(to_cloud[1]).month_cost, 8000.0);
}

TEST(Topology, PathToForeignSiteThrows) {
    const auto topo = reference_topology();
    const SiteId in = input_node(*topo, 0);
    EXPECT_THROW(topo->path_links(in, site_of(*topo, SiteKind::Cloud, 1)), LookupError);
    EXPECT_THROW(topo->path_links(in, site_of(*topo, SiteKind::UserEdge, 1)), LookupError);
}

TEST(Topology, UnknownIdsThrow) {
    const auto topo = reference_topology();
    EXPECT_THROW(topo->site(SiteId(100000)), LookupError);
    EXPECT_THROW(topo->device(DeviceId(100000)), LookupError);
    EXPECT_THROW(topo->link(LinkId(100000)), LookupError);
    EXPECT_THROW(topo->ancestor_sites(site_of(*topo, SiteKind::Cloud, 0)), LookupError);
}

TEST(Topology, MinimalTreeHasOneChain) {
    const ScenarioConfig c = reference_scenario();
    const Topology topo = build_topology(TopologyShape{1, 1, 1, 1, Attachment::Block}, c.hardware);
    const SiteId in = topo.sites_of_kind(SiteKind::InputNode)[0];
    const auto chain = topo.ancestor_sites(in);
    EXPECT_EQ(chain[2], topo.sites_of_kind(SiteKind::Cloud)[0]);
    EXPECT_EQ(topo.links().size(), 2u);
}

TEST(Topology, UnevenLayerNamesTheLayer) {
    const ScenarioConfig c = reference_scenario();
    try {
        build_topology(TopologyShape{5, 20, 61, 300, Attachment::Block}, c.hardware);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("user_edge"), std::string::npos) << e.what();
    }
}

TEST(Topology, MissingUplinkRejected) {
    ScenarioConfig c = reference_scenario();
    c.hardware.user_edge.uplink.reset();
    EXPECT_THROW(build_topology(c.shape, c.hardware), ConfigError);
}

TEST(Topology, RoundRobinAttachment) {
    const ScenarioConfig c = reference_scenario();
    TopologyShape shape = c.shape;
    shape.attachment = Attachment::RoundRobin;
    const Topology topo = build_topology(shape, c.hardware);
    const auto chain = topo.ancestor_sites(topo.sites_of_kind(SiteKind::InputNode)[61]);
    EXPECT_EQ(topo.site(chain[0]).ordinal, 1u);
    EXPECT_EQ(topo.site(chain[1]).ordinal, 1u);
    EXPECT_EQ(topo.site(chain[2]).ordinal, 1u);
}

TEST(Topology, BuildIsPure) {
    const ScenarioConfig c = reference_scenario();
    const Topology a = build_topology(c.shape, c.hardware);
    const Topology b = build_topology(c.shape, c.hardware);
    ASSERT_EQ(a.sites().size(), b.sites().size());
    ASSERT_EQ(a.devices().size(), b.devices().size());
    for (std::size_t i = 0; i < a.devices().size(); ++i) {
        EXPECT_EQ(a.devices()[i].site, b.devices()[i].site);
        EXPECT_EQ(a.devices()[i].capacity, b.devices()[i].capacity);
    }
    for (std::size_t i = 0; i < a.links().size(); ++i) {
        EXPECT_EQ(a.links()[i].child, b.links()[i].child);
    }
}
