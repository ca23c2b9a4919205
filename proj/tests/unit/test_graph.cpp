#include <gtest/gtest.h>

#include "qgraph/graph.hpp"

using namespace qgraph;

TEST(Graph, CoordinateLayout) {
    const MetricGraph g({"u", "v"}, {{"u", "v", 1.0}, {"v", "u", 2.0}}, {{"u"}});
    EXPECT_EQ(g.dim(), 5);
    EXPECT_EQ(g.external_coord(0), 0);
    EXPECT_EQ(g.left_coord(0), 1);
    EXPECT_EQ(g.left_coord(1), 2);
    EXPECT_EQ(g.right_coord(0), 3);
    EXPECT_EQ(g.right_coord(1), 4);
    EXPECT_EQ(g.vertex_coordinates("u"), (std::vector<int>{0, 1, 4}));
    EXPECT_EQ(g.vertex_coordinates("v"), (std::vector<int>{2, 3}));
    EXPECT_DOUBLE_EQ(g.total_length(), 3.0);
    EXPECT_DOUBLE_EQ(g.max_length(), 2.0);
    EXPECT_FALSE(g.equal_lengths());
    EXPECT_FALSE(g.compact());
}

TEST(Graph, ValidateRejectsBadInput) {
    EXPECT_THROW(validate(MetricGraph({"u", "u"}, {}, {})), GraphError);
    EXPECT_THROW(validate(MetricGraph({"u"}, {{"u", "w", 1.0}}, {})), GraphError);
    EXPECT_THROW(validate(MetricGraph({"u", "v"}, {{"u", "v", 0.0}}, {})), GraphError);
    EXPECT_THROW(validate(MetricGraph({"u", "v"}, {{"u", "v", -1.0}}, {})), GraphError);
    EXPECT_THROW(validate(MetricGraph({"u"}, {}, {{"x"}})), GraphError);
}

TEST(Graph, LoopCountsTwice) {
    const MetricGraph g({"u"}, {{"u", "u", 1.0}}, {});
    EXPECT_EQ(degree(g, "u"), 2);
    EXPECT_THROW(degree(g, "x"), GraphError);
}

TEST(Graph, Builtins) {
    const MetricGraph cube = graphs::cube(1.0);
    const ValidationReport v = validate(cube);
    EXPECT_EQ(v.num_vertices, 8);
    EXPECT_EQ(v.num_internal, 12);
    EXPECT_EQ(v.d, 24);
    EXPECT_TRUE(v.equal_length);
    for (const auto& [name, deg] : v.degrees) EXPECT_EQ(deg, 3) << name;

    const MetricGraph star = graphs::compact_star(4, 2.0);
    EXPECT_EQ(degree(star, "c"), 4);
    EXPECT_DOUBLE_EQ(star.total_length(), 8.0);

    const MetricGraph lines = graphs::half_lines(3);
    EXPECT_EQ(lines.dim(), 3);
    EXPECT_TRUE(validate(graphs::edge_with_lead(1.0)).degrees.at("v1") == 2);
    EXPECT_EQ(graphs::two_edge_loop(1.0).dim(), 4);
}
