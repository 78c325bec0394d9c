#pragma once

// Finite weighted graphs (Lambda, beta) with a per-vertex field h >= 0.
// Instances are immutable once built; every model and walk in the
// library references one of these.

#include <Eigen/Dense>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace isolab {

class Graph {
  public:
    // edges: (i, j, beta_ij) with beta_ij >= 0.  A duplicate of an edge
    // is accepted only with an identical weight.  The positive-weight
    // edge set must connect all vertices.
    static Graph build(int n_vertices, const std::vector<std::tuple<int, int, double>>& edges,
                       const std::vector<double>& h = {});

    // Parses {"vertices": N, "edges": [[i, j, beta], ...], "h": [...]}.
    static Graph from_json_text(const std::string& text);
    static Graph from_json_file(const std::string& path);

    int n() const { return n_; }
    double beta(int i, int j) const { return beta_(i, j); }
    const Eigen::MatrixXd& beta_matrix() const { return beta_; }
    double h(int i) const { return h_[static_cast<size_t>(i)]; }
    const std::vector<double>& h() const { return h_; }
    bool h_is_zero() const;

    // Neighbours with positive edge weight, as (vertex, beta) pairs.
    const std::vector<std::pair<int, double>>& neighbors(int i) const {
        return adj_[static_cast<size_t>(i)];
    }

    // The matrix of the negative graph Laplacian quadratic form:
    // diag(sum_j beta_ij) - beta.  Positive semi-definite.
    Eigen::MatrixXd laplacian() const;

    // Hop distance over positive-weight edges.
    int distance(int i, int j) const;

    // max_i sum_j beta_ij
    double beta_star() const;

    // Canonical JSON round-trip text, used for config hashing.
    std::string canonical_text() const;

  private:
    Graph() = default;
    int n_ = 0;
    Eigen::MatrixXd beta_;
    std::vector<double> h_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
};

}  // namespace isolab
