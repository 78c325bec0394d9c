#include "isolab/graph.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "isolab/errors.hpp"

namespace isolab {

Graph Graph::build(int n_vertices, const std::vector<std::tuple<int, int, double>>& edges,
                   const std::vector<double>& h) {
    if (n_vertices <= 0) throw ConfigError("graph needs at least one vertex");
    if (!h.empty() && static_cast<int>(h.size()) != n_vertices)
        throw ConfigError("h must have one entry per vertex");

    Graph g;
    g.n_ = n_vertices;
    g.beta_ = Eigen::MatrixXd::Zero(n_vertices, n_vertices);
    g.h_ = h.empty() ? std::vector<double>(static_cast<size_t>(n_vertices), 0.0) : h;

    Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(n_vertices, n_vertices);
    for (const auto& [i, j, w] : edges) {
        if (i < 0 || i >= n_vertices || j < 0 || j >= n_vertices)
            throw ConfigError("edge endpoint out of range");
        if (i == j) throw ConfigError("self-loops are not allowed");
        if (w < 0.0) throw NegativeWeight("edge weight must be non-negative");
        if (seen(i, j) != 0.0 && g.beta_(i, j) != w)
            throw AsymmetricInput("conflicting weights for duplicate edge");
        seen(i, j) = seen(j, i) = 1.0;
        g.beta_(i, j) = g.beta_(j, i) = w;
    }
    for (double hv : g.h_)
        if (hv < 0.0) throw ConfigError("h must be non-negative");

    g.adj_.resize(static_cast<size_t>(n_vertices));
    for (int i = 0; i < n_vertices; ++i)
        for (int j = 0; j < n_vertices; ++j)
            if (g.beta_(i, j) > 0.0) g.adj_[static_cast<size_t>(i)].emplace_back(j, g.beta_(i, j));

    // Connectivity over positive-weight edges.
    std::vector<char> visited(static_cast<size_t>(n_vertices), 0);
    std::deque<int> queue{0};
    visited[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (const auto& [u, w] : g.adj_[static_cast<size_t>(v)]) {
            (void)w;
            if (!visited[static_cast<size_t>(u)]) {
                visited[static_cast<size_t>(u)] = 1;
                ++count;
                queue.push_back(u);
            }
        }
    }
    if (count != n_vertices) throw DisconnectedGraph("graph is not connected");
    return g;
}

Graph Graph::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid graph JSON: ") + e.what());
    }
    if (!j.contains("vertices") || !j.contains("edges"))
        throw ConfigError("graph JSON needs \"vertices\" and \"edges\"");
    int n = j.at("vertices").get<int>();
    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw ConfigError("each edge must be [i, j, beta]");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
    }
    std::vector<double> h;
    if (j.contains("h")) h = j.at("h").get<std::vector<double>>();
    return build(n, edges, h);
}

Graph Graph::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

bool Graph::h_is_zero() const {
    for (double v : h_)
        if (v != 0.0) return false;
    return true;
}

Eigen::MatrixXd Graph::laplacian() const {
    Eigen::MatrixXd lap = -beta_;
    for (int i = 0; i < n_; ++i) lap(i, i) = beta_.row(i).sum();
    return lap;
}

int Graph::distance(int i, int j) const {
    if (i == j) return 0;
    std::vector<int> dist(static_cast<size_t>(n_), -1);
    std::deque<int> queue{i};
    dist[static_cast<size_t>(i)] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (const auto& [u, w] : adj_[static_cast<size_t>(v)]) {
            (void)w;
            if (dist[static_cast<size_t>(u)] < 0) {
                dist[static_cast<size_t>(u)] = dist[static_cast<size_t>(v)] + 1;
                if (u == j) return dist[static_cast<size_t>(u)];
                queue.push_back(u);
            }
        }
    }
    return -1;  // unreachable for connected graphs
}

double Graph::beta_star() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, beta_.row(i).sum());
    return m;
}

std::string Graph::canonical_text() const {
    nlohmann::json j;
    j["vertices"] = n_;
    auto edges = nlohmann::json::array();
    for (int i = 0; i < n_; ++i)
        for (int k = i + 1; k < n_; ++k)
            if (beta_(i, k) > 0.0) edges.push_back({i, k, beta_(i, k)});
    j["edges"] = edges;
    j["h"] = h_;
    return j.dump();
}

}  // namespace isolab
