#pragma once

#include <compare>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ncs/certificates.hpp"

namespace ncs {

/// A vertex of the NCS graph, identified by the M plants that hold the
/// network (closed loop). Ids are 1-based and kept sorted.
class VertexLabel {
public:
    VertexLabel() = default;
    explicit VertexLabel(std::vector<int> closed_loop_set);

    [[nodiscard]] const std::vector<int>& plants() const noexcept { return ids_; }
    [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
    [[nodiscard]] bool contains(int plant) const noexcept;
    [[nodiscard]] std::string to_string() const;

    friend auto operator<=>(const VertexLabel&, const VertexLabel&) = default;
    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;

private:
    std::vector<int> ids_;
};

using Cycle = std::vector<VertexLabel>;
using WeightVector = std::vector<double>;

class InvalidCapacity : public Error {
public:
    using Error::Error;
};

class SelfLoop : public Error {
public:
    using Error::Error;
};

class DegenerateCycle : public Error {
public:
    using Error::Error;
};

/// Ξ split into the part that scales with the T-factors and the part that
/// does not: Ξ_i = Σ_j w̄_i(v_j)·T_j + Σ_j w_i(v_j, v_{j+1}).
struct XiParts {
    WeightVector vertex_part;
    WeightVector edge_part;
};

/**
 * Complete labelled digraph over all M-subsets of N plants, kept implicit.
 * Vertex weights are the certificate rates (−|λ_s| when closed loop,
 * +|λ_u| otherwise); edge weights are ln μ on status changes.
 */
class NcsGraph {
public:
    NcsGraph(int n_plants, int capacity, std::vector<PlantCertificate> certificates);

    [[nodiscard]] int n_plants() const noexcept { return n_; }
    [[nodiscard]] int capacity() const noexcept { return m_; }
    [[nodiscard]] const std::vector<PlantCertificate>& certificates() const noexcept { return certs_; }

    /// Throws InvalidArgument unless v is an M-subset of {1..N}.
    void validate(const VertexLabel& v) const;

    [[nodiscard]] WeightVector vertex_weight(const VertexLabel& v) const;
    [[nodiscard]] WeightVector edge_weight(const VertexLabel& u, const VertexLabel& v) const;

    [[nodiscard]] XiParts xi_parts(const Cycle& cycle) const;
    [[nodiscard]] WeightVector xi(const Cycle& cycle, const std::vector<double>& t_factors) const;

private:
    int n_;
    int m_;
    std::vector<PlantCertificate> certs_;
};

/// Checks length ≥ 2 and distinct consecutive vertices including the wrap.
void check_cycle_shape(const Cycle& cycle);

[[nodiscard]] boost::multiprecision::cpp_int vertex_count(int n, int m);

} // namespace ncs
