#include "ncs/graph.hpp"

#include <algorithm>
#include <cmath>

namespace ncs {

VertexLabel::VertexLabel(std::vector<int> closed_loop_set) : ids_(std::move(closed_loop_set)) {
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
        throw InvalidArgument("vertex label has duplicate plant ids");
    }
}

bool VertexLabel::contains(int plant) const noexcept {
    return std::binary_search(ids_.begin(), ids_.end(), plant);
}

std::string VertexLabel::to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += std::to_string(ids_[i]);
    }
    return s + "}";
}

NcsGraph::NcsGraph(int n_plants, int capacity, std::vector<PlantCertificate> certificates)
    : n_(n_plants), m_(capacity), certs_(std::move(certificates)) {
    if (!(m_ > 0 && m_ < n_)) {
        throw InvalidCapacity("capacity M=" + std::to_string(m_) + " must satisfy 0 < M < N=" +
                              std::to_string(n_));
    }
    if (certs_.size() != static_cast<std::size_t>(n_)) {
        throw DimensionMismatch("graph needs one certificate per plant");
    }
}

void NcsGraph::validate(const VertexLabel& v) const {
    if (v.size() != static_cast<std::size_t>(m_)) {
        throw InvalidArgument("vertex " + v.to_string() + " does not hold exactly M=" +
                              std::to_string(m_) + " plants");
    }
    if (!v.plants().empty() && (v.plants().front() < 1 || v.plants().back() > n_)) {
        throw InvalidArgument("vertex " + v.to_string() + " names a plant outside 1.." +
                              std::to_string(n_));
    }
}

WeightVector NcsGraph::vertex_weight(const VertexLabel& v) const {
    validate(v);
    WeightVector w(static_cast<std::size_t>(n_));
    for (int i = 1; i <= n_; ++i) {
        const auto& c = certs_[static_cast<std::size_t>(i - 1)];
        w[static_cast<std::size_t>(i - 1)] =
            v.contains(i) ? -std::abs(c.stable.lambda) : std::abs(c.unstable.lambda);
    }
    return w;
}

WeightVector NcsGraph::edge_weight(const VertexLabel& u, const VertexLabel& v) const {
    validate(u);
    validate(v);
    if (u == v) {
        throw SelfLoop("no edge from " + u.to_string() + " to itself");
    }
    WeightVector w(static_cast<std::size_t>(n_), 0.0);
    for (int i = 1; i <= n_; ++i) {
        const bool before = u.contains(i);
        const bool after = v.contains(i);
        const auto& c = certs_[static_cast<std::size_t>(i - 1)];
        if (before && !after) {
            w[static_cast<std::size_t>(i - 1)] = std::log(c.mu_su);
        } else if (!before && after) {
            w[static_cast<std::size_t>(i - 1)] = std::log(c.mu_us);
        }
    }
    return w;
}

void check_cycle_shape(const Cycle& cycle) {
    if (cycle.size() < 2) {
        throw DegenerateCycle("a cycle needs at least two vertices");
    }
    for (std::size_t j = 0; j < cycle.size(); ++j) {
        if (cycle[j] == cycle[(j + 1) % cycle.size()]) {
            throw DegenerateCycle("consecutive vertices " + cycle[j].to_string() +
                                  " repeat at position " + std::to_string(j));
        }
    }
}

XiParts NcsGraph::xi_parts(const Cycle& cycle) const {
    check_cycle_shape(cycle);
    const auto n = static_cast<std::size_t>(n_);
    XiParts parts{WeightVector(n, 0.0), WeightVector(n, 0.0)};
    for (std::size_t j = 0; j < cycle.size(); ++j) {
        const auto wv = vertex_weight(cycle[j]);
        const auto we = edge_weight(cycle[j], cycle[(j + 1) % cycle.size()]);
        for (std::size_t i = 0; i < n; ++i) {
            parts.vertex_part[i] += wv[i];
            parts.edge_part[i] += we[i];
        }
    }
    return parts;
}

WeightVector NcsGraph::xi(const Cycle& cycle, const std::vector<double>& t_factors) const {
    check_cycle_shape(cycle);
    if (t_factors.size() != cycle.size()) {
        throw DimensionMismatch("xi: need one T-factor per cycle vertex");
    }
    const auto n = static_cast<std::size_t>(n_);
    WeightVector out(n, 0.0);
    for (std::size_t j = 0; j < cycle.size(); ++j) {
        if (!(t_factors[j] > 0.0)) {
            throw InvalidArgument("xi: T-factors must be positive");
        }
        const auto wv = vertex_weight(cycle[j]);
        const auto we = edge_weight(cycle[j], cycle[(j + 1) % cycle.size()]);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += wv[i] * t_factors[j] + we[i];
        }
    }
    return out;
}

boost::multiprecision::cpp_int vertex_count(int n, int m) {
    if (m <= 0 || m >= n) {
        throw InvalidCapacity("vertex_count: need 0 < M < N, got N=" + std::to_string(n) +
                              ", M=" + std::to_string(m));
    }
    using boost::multiprecision::cpp_int;
    const int k = std::min(m, n - m);
    cpp_int result = 1;
    // Each partial product C(n-k+i, i) is an integer, so the division is exact.
    for (int i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;
    }
    return result;
}

} // namespace ncs
