#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "covertime/bitset.hpp"
#include "covertime/graph.hpp"
#include "covertime/rng.hpp"

namespace covertime {

enum class ModelKind {
    Explicit,
    KUniform,
    Lottery,
    BlockPartition,
    GraphNeighborhood,
    HypercubeSubcube,
    SpanningTree,
};

const char* to_string(ModelKind kind);

struct ExplicitEntry {
    std::vector<uint32_t> members;
    double prob;
};

/// A (d-k)-dimensional subcube of {0,1}^d, written as the k fixed coordinates.
struct SubcubeClause {
    uint32_t mask = 0;  // fixed coordinate positions
    uint32_t bits = 0;  // fixed coordinate values (subset of mask)
};

/// One sampled coupon. `members` is filled for every kind except hypercube
/// subcubes above the materialisation threshold, which stay symbolic.
struct CouponDraw {
    std::vector<uint32_t> members;
    std::optional<SubcubeClause> clause;
    bool materialized() const { return !clause.has_value() || !members.empty(); }
};

/// Immutable description of a coupon distribution. All derived quantities
/// (intensities, moments, structure flags) are fixed at construction, so
/// concurrent sampling through separate RngStreams is safe.
class CouponModel {
  public:
    static CouponModel k_uniform(uint64_t n, uint64_t k);
    static CouponModel lottery(uint64_t n, double p);
    static CouponModel block_partition(uint64_t n_blocks, uint64_t block_size);
    static CouponModel graph_neighborhood(Graph g);
    static CouponModel hypercube_subcube(uint32_t d, uint32_t k);
    static CouponModel spanning_tree(Graph g);
    static CouponModel explicit_support(uint64_t n, std::vector<ExplicitEntry> support);

    ModelKind kind() const { return kind_; }
    uint64_t n() const { return n_; }
    std::string describe() const;

    bool balanced() const { return balanced_; }
    bool exchangeable() const { return exchangeable_; }
    bool transitive() const { return transitive_; }

    /// Expected / max / mean-square coupon size (exact for every kind).
    double mu() const { return mu_; }
    double max_size() const { return max_size_; }
    double chi() const { return chi_; }

    double element_prob(uint64_t x) const;
    /// Closed-form pair intensity, or nullopt when only estimation applies.
    std::optional<double> pair_prob(uint64_t x, uint64_t y) const;

    /// True when element_prob is backed by sampling rather than a closed form.
    bool intensities_estimated() const { return q_estimated_; }
    double intensity_ci_radius() const { return q_ci_; }
    uint64_t intensity_draws() const { return q_draws_; }

    /// Element partition for the structured fast-coverage test, if any.
    const std::vector<std::vector<uint32_t>>& declared_partition() const { return partition_; }
    void declare_partition(std::vector<std::vector<uint32_t>> parts);

    // Kind-specific accessors used by samplers, oracles and apps.
    uint64_t k_param() const { return k_; }
    double lottery_p() const { return p_; }
    uint64_t num_blocks() const { return n_blocks_; }
    uint64_t block_size() const { return block_size_; }
    uint32_t cube_dim() const { return d_; }
    const Graph& graph() const { return *graph_; }
    const std::vector<ExplicitEntry>& support() const { return support_; }
    const std::vector<uint32_t>& closed_neighborhood(uint32_t v) const {
        return closed_nbhd_[v];
    }

  private:
    CouponModel() = default;
    void finalize_explicit();

    ModelKind kind_ = ModelKind::Explicit;
    uint64_t n_ = 0;
    uint64_t k_ = 0;
    double p_ = 0.0;
    uint64_t n_blocks_ = 0;
    uint64_t block_size_ = 0;
    uint32_t d_ = 0;
    std::shared_ptr<const Graph> graph_;
    std::vector<ExplicitEntry> support_;
    std::vector<double> support_cum_;
    std::vector<std::vector<uint32_t>> closed_nbhd_;
    std::vector<std::vector<uint32_t>> partition_;

    std::vector<double> q_;  // materialized intensities (Explicit / graphs)
    bool q_estimated_ = false;
    double q_ci_ = 0.0;
    uint64_t q_draws_ = 0;

    double mu_ = 0.0, max_size_ = 0.0, chi_ = 0.0;
    bool balanced_ = false, exchangeable_ = false, transitive_ = false;

    friend class Sampler;
};

/// Threshold below which hypercube subcube draws are materialized.
inline constexpr uint32_t kSubcubeMaterializeDim = 20;
/// Hard cap for any materialized subcube request.
inline constexpr uint32_t kSubcubeMaterializeMaxDim = 30;

/// Draws one coupon. Convenience wrapper; hot loops should use Sampler.
CouponDraw sample(const CouponModel& model, RngStream& rng);

/// Symbolic subcube draw (hypercube models only).
SubcubeClause sample_subcube_clause(const CouponModel& model, RngStream& rng);

/// Expands a subcube clause into its member assignments. Throws above the
/// d > 30 memory guard.
std::vector<uint32_t> materialize_subcube(const SubcubeClause& clause, uint32_t d);

/// Reusable per-thread sampling context. draw() returns a reference that is
/// valid until the next call.
class Sampler {
  public:
    explicit Sampler(const CouponModel& model);
    const std::vector<uint32_t>& draw(RngStream& rng);

  private:
    const CouponModel* model_;
    std::vector<uint32_t> buf_;
    Bitset dedupe_;
    std::vector<uint32_t> touched_;
    std::vector<uint32_t> free_coords_;
    std::vector<int64_t> st_next_;
    std::vector<uint8_t> st_in_tree_;
};

}  // namespace covertime
