#include <doctest.h>

#include "isolab/errors.hpp"
#include "isolab/graph.hpp"

using namespace isolab;

TEST_CASE("three-vertex path laplacian") {
    Graph g = Graph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    Eigen::MatrixXd lap = g.laplacian();
    Eigen::MatrixXd want(3, 3);
    want << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK((lap - want).norm() == doctest::Approx(0.0).epsilon(1e-15));

    CHECK(g.distance(0, 2) == 2);
    CHECK(g.distance(2, 1) == 1);
    CHECK(g.distance(1, 1) == 0);
    CHECK(g.beta_star() == doctest::Approx(2.0));
    CHECK(g.h_is_zero());

    CHECK(g.neighbors(1).size() == 2);
    CHECK(g.neighbors(0).size() == 1);
    CHECK(g.neighbors(0)[0].first == 1);
}

TEST_CASE("single vertex is a valid graph") {
    Graph g = Graph::build(1, {}, {2.0});
    CHECK(g.n() == 1);
    CHECK(g.h(0) == 2.0);
    CHECK(g.laplacian()(0, 0) == 0.0);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Graph::build(3, {{0, 1, 1.0}}), DisconnectedGraph);
    CHECK_THROWS_AS(Graph::build(2, {{0, 1, -0.5}}), NegativeWeight);
    CHECK_THROWS_AS(Graph::build(2, {{0, 1, 1.0}, {1, 0, 2.0}}), AsymmetricInput);
    // A duplicate edge with the same weight is fine.
    CHECK_NOTHROW(Graph::build(2, {{0, 1, 1.0}, {1, 0, 1.0}}));
    CHECK_THROWS_AS(Graph::build(2, {{0, 2, 1.0}}), ConfigError);
    CHECK_THROWS_AS(Graph::build(2, {{0, 0, 1.0}}), ConfigError);
    CHECK_THROWS_AS(Graph::build(0, {}), ConfigError);
    CHECK_THROWS_AS(Graph::build(2, {{0, 1, 1.0}}, {1.0}), ConfigError);
    CHECK_THROWS_AS(Graph::build(2, {{0, 1, 1.0}}, {1.0, -1.0}), ConfigError);
}

TEST_CASE("json round trip") {
    Graph g = Graph::from_json_text(
        R"({"vertices": 3, "edges": [[0,1,0.5],[1,2,1.5]], "h": [0.1, 0.0, 0.2]})");
    CHECK(g.n() == 3);
    CHECK(g.beta(0, 1) == 0.5);
    CHECK(g.beta(1, 0) == 0.5);
    CHECK(g.beta(2, 1) == 1.5);
    CHECK(g.beta(0, 2) == 0.0);
    CHECK(g.h(2) == 0.2);
    CHECK(!g.h_is_zero());

    Graph g2 = Graph::from_json_text(g.canonical_text());
    CHECK(g2.canonical_text() == g.canonical_text());

    CHECK_THROWS_AS(Graph::from_json_text("{"), ConfigError);
    CHECK_THROWS_AS(Graph::from_json_text(R"({"edges": []})"), ConfigError);
    CHECK_THROWS_AS(Graph::from_json_text(R"({"vertices": 1, "edges": [[0,1]]})"),
                    ConfigError);
    CHECK_THROWS_AS(Graph::from_json_file("/nonexistent/g.json"), ConfigError);
}

TEST_CASE("h defaults to zero") {
    Graph g = Graph::from_json_text(R"({"vertices": 2, "edges": [[0,1,1.0]]})");
    CHECK(g.h_is_zero());
    CHECK(g.h().size() == 2);
}
