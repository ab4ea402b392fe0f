#include "covertime/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "covertime/numeric.hpp"

namespace covertime {

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Explicit: return "explicit";
        case ModelKind::KUniform: return "k_uniform";
        case ModelKind::Lottery: return "lottery";
        case ModelKind::BlockPartition: return "block_partition";
        case ModelKind::GraphNeighborhood: return "graph_neighborhood";
        case ModelKind::HypercubeSubcube: return "hypercube_subcube";
        case ModelKind::SpanningTree: return "spanning_tree";
    }
    return "?";
}

CouponModel CouponModel::k_uniform(uint64_t n, uint64_t k) {
    if (n == 0 || k == 0 || k > n) throw std::invalid_argument("k_uniform: need 1 <= k <= n");
    CouponModel m;
    m.kind_ = ModelKind::KUniform;
    m.n_ = n;
    m.k_ = k;
    m.mu_ = static_cast<double>(k);
    m.max_size_ = static_cast<double>(k);
    m.chi_ = static_cast<double>(k) * static_cast<double>(k);
    m.balanced_ = m.exchangeable_ = m.transitive_ = true;
    return m;
}

CouponModel CouponModel::lottery(uint64_t n, double p) {
    if (n == 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("lottery: need p in [0,1]");
    CouponModel m;
    m.kind_ = ModelKind::Lottery;
    m.n_ = n;
    m.p_ = p;
    const double nd = static_cast<double>(n);
    m.mu_ = (1.0 - p) + p * nd;
    m.max_size_ = p > 0.0 ? nd : 1.0;
    m.chi_ = (1.0 - p) + p * nd * nd;
    m.balanced_ = m.exchangeable_ = m.transitive_ = true;
    return m;
}

CouponModel CouponModel::block_partition(uint64_t n_blocks, uint64_t block_size) {
    if (n_blocks == 0 || block_size == 0)
        throw std::invalid_argument("block_partition: need n_blocks, block_size >= 1");
    CouponModel m;
    m.kind_ = ModelKind::BlockPartition;
    m.n_ = n_blocks * block_size;
    m.n_blocks_ = n_blocks;
    m.block_size_ = block_size;
    m.mu_ = static_cast<double>(block_size);
    m.max_size_ = m.mu_;
    m.chi_ = m.mu_ * m.mu_;
    m.balanced_ = true;
    m.transitive_ = true;  // cyclic block shifts act transitively
    m.exchangeable_ = (n_blocks == 1);
    m.partition_.resize(n_blocks);
    for (uint64_t b = 0; b < n_blocks; ++b) {
        m.partition_[b].resize(block_size);
        std::iota(m.partition_[b].begin(), m.partition_[b].end(),
                  static_cast<uint32_t>(b * block_size));
    }
    return m;
}

CouponModel CouponModel::graph_neighborhood(Graph g) {
    if (g.num_vertices() == 0) throw std::invalid_argument("graph_neighborhood: empty graph");
    CouponModel m;
    m.kind_ = ModelKind::GraphNeighborhood;
    m.n_ = g.num_vertices();
    const bool regular = g.regular();
    const bool generator_transitive = g.tag() == "cycle" || g.tag() == "complete";
    m.graph_ = std::make_shared<Graph>(std::move(g));
    const auto& gr = *m.graph_;
    m.closed_nbhd_.resize(m.n_);
    m.q_.assign(m.n_, 0.0);
    KahanSum mu, chi;
    for (uint32_t v = 0; v < m.n_; ++v) {
        auto& nb = m.closed_nbhd_[v];
        nb.push_back(v);
        for (auto [w, id] : gr.adjacency(v)) {
            (void)id;
            nb.push_back(w);
        }
        std::sort(nb.begin(), nb.end());
        const double size = static_cast<double>(nb.size());
        mu.add(size / static_cast<double>(m.n_));
        chi.add(size * size / static_cast<double>(m.n_));
        m.max_size_ = std::max(m.max_size_, size);
    }
    // q_x = (deg(x)+1)/n: x is covered when the drawn vertex is x or adjacent.
    for (uint32_t x = 0; x < m.n_; ++x)
        m.q_[x] = static_cast<double>(gr.degree(x) + 1) / static_cast<double>(m.n_);
    m.mu_ = mu.value();
    m.chi_ = chi.value();
    m.balanced_ = regular;
    m.transitive_ = generator_transitive;
    m.exchangeable_ = false;
    return m;
}

CouponModel CouponModel::hypercube_subcube(uint32_t d, uint32_t k) {
    if (d == 0 || d > 62 || k > d)
        throw std::invalid_argument("hypercube_subcube: need 0 <= k <= d <= 62");
    CouponModel m;
    m.kind_ = ModelKind::HypercubeSubcube;
    m.d_ = d;
    m.k_ = k;
    m.n_ = 1ull << d;
    m.mu_ = std::ldexp(1.0, static_cast<int>(d - k));
    m.max_size_ = m.mu_;
    m.chi_ = m.mu_ * m.mu_;
    m.balanced_ = true;
    m.transitive_ = true;
    m.exchangeable_ = (k == 0);
    return m;
}

CouponModel CouponModel::spanning_tree(Graph g) {
    if (!g.connected()) throw std::invalid_argument("spanning_tree: graph must be connected");
    CouponModel m;
    m.kind_ = ModelKind::SpanningTree;
    m.n_ = g.num_edges();
    const bool edge_transitive = g.tag() == "cycle" || g.tag() == "complete";
    m.graph_ = std::make_shared<Graph>(std::move(g));
    const auto& gr = *m.graph_;
    const double tree_size = static_cast<double>(gr.num_vertices() - 1);
    m.mu_ = tree_size;
    m.max_size_ = tree_size;
    m.chi_ = tree_size * tree_size;
    m.balanced_ = edge_transitive;
    m.transitive_ = edge_transitive;
    m.exchangeable_ = false;
    if (edge_transitive) {
        m.q_.assign(m.n_, tree_size / static_cast<double>(m.n_));
    } else {
        // Sampling fallback for edge inclusion probabilities (the exact
        // linear-algebra route is out of scope by design).
        const uint64_t draws = 10000;
        RngStream rng(mix_seed(0x53545245ull, mix_seed(gr.num_vertices(), gr.num_edges())));
        std::vector<uint64_t> hits(m.n_, 0);
        std::vector<int64_t> next;
        std::vector<uint8_t> in_tree;
        for (uint64_t i = 0; i < draws; ++i)
            for (uint32_t e : sample_spanning_tree(gr, rng, next, in_tree)) ++hits[e];
        m.q_.resize(m.n_);
        double max_ci = 0.0;
        for (uint64_t e = 0; e < m.n_; ++e) {
            m.q_[e] = static_cast<double>(hits[e]) / static_cast<double>(draws);
            max_ci = std::max(max_ci, wilson_radius(static_cast<double>(hits[e]),
                                                    static_cast<double>(draws)));
        }
        m.q_estimated_ = true;
        m.q_ci_ = max_ci;
        m.q_draws_ = draws;
    }
    return m;
}

CouponModel CouponModel::explicit_support(uint64_t n, std::vector<ExplicitEntry> support) {
    if (n == 0) throw std::invalid_argument("explicit: need n >= 1");
    if (support.empty()) throw std::invalid_argument("explicit: empty support");
    CouponModel m;
    m.kind_ = ModelKind::Explicit;
    m.n_ = n;
    m.support_ = std::move(support);
    m.finalize_explicit();
    return m;
}

void CouponModel::finalize_explicit() {
    KahanSum total;
    q_.assign(n_, 0.0);
    KahanSum mu, chi;
    for (auto& entry : support_) {
        if (entry.prob <= 0.0) throw std::invalid_argument("explicit: probs must be > 0");
        std::sort(entry.members.begin(), entry.members.end());
        entry.members.erase(std::unique(entry.members.begin(), entry.members.end()),
                            entry.members.end());
        for (uint32_t x : entry.members) {
            if (x >= n_) throw std::invalid_argument("explicit: member out of range");
            q_[x] += entry.prob;
        }
        const double size = static_cast<double>(entry.members.size());
        total.add(entry.prob);
        mu.add(size * entry.prob);
        chi.add(size * size * entry.prob);
        max_size_ = std::max(max_size_, size);
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw std::invalid_argument("explicit: probs must sum to 1 within 1e-12");
    mu_ = mu.value();
    chi_ = chi.value();
    support_cum_.resize(support_.size());
    double run = 0.0;
    for (size_t i = 0; i < support_.size(); ++i) {
        run += support_[i].prob;
        support_cum_[i] = run;
    }
    support_cum_.back() = 1.0;

    balanced_ = true;
    for (double qx : q_)
        if (std::abs(qx - q_[0]) > 1e-12) {
            balanced_ = false;
            break;
        }
    // Exchangeable iff h(S) depends on |S| alone: every size class present in
    // the support must have equal probabilities on all binom(n, s) sets.
    exchangeable_ = true;
    std::vector<std::pair<uint64_t, std::pair<double, uint64_t>>> by_size;
    for (const auto& entry : support_) {
        const uint64_t s = entry.members.size();
        auto it = std::find_if(by_size.begin(), by_size.end(),
                               [s](const auto& kv) { return kv.first == s; });
        if (it == by_size.end())
            by_size.push_back({s, {entry.prob, 1}});
        else {
            if (std::abs(it->second.first - entry.prob) > 1e-12) exchangeable_ = false;
            it->second.second++;
        }
    }
    if (exchangeable_)
        for (const auto& [s, pc] : by_size) {
            const double expected = binomial(static_cast<double>(n_), static_cast<double>(s));
            if (std::abs(expected - static_cast<double>(pc.second)) > 0.5) exchangeable_ = false;
        }
    // General transitivity detection is out of reach; exchangeability is the
    // only certificate we can verify for explicit supports.
    transitive_ = exchangeable_;
}

std::string CouponModel::describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "(n=" << n_;
    switch (kind_) {
        case ModelKind::KUniform: os << ",k=" << k_; break;
        case ModelKind::Lottery: os << ",p=" << p_; break;
        case ModelKind::BlockPartition:
            os << ",blocks=" << n_blocks_ << ",block_size=" << block_size_;
            break;
        case ModelKind::HypercubeSubcube: os << ",d=" << d_ << ",k=" << k_; break;
        case ModelKind::GraphNeighborhood:
        case ModelKind::SpanningTree:
            os << ",graph_vertices=" << graph_->num_vertices()
               << ",graph_edges=" << graph_->num_edges();
            break;
        case ModelKind::Explicit: os << ",support=" << support_.size(); break;
    }
    os << ")";
    return os.str();
}

void CouponModel::declare_partition(std::vector<std::vector<uint32_t>> parts) {
    std::vector<uint8_t> seen(n_, 0);
    uint64_t covered = 0;
    for (const auto& part : parts) {
        if (part.empty()) throw std::invalid_argument("partition: empty class");
        for (uint32_t x : part) {
            if (x >= n_ || seen[x]) throw std::invalid_argument("partition: not a partition of [n)");
            seen[x] = 1;
            ++covered;
        }
    }
    if (covered != n_) throw std::invalid_argument("partition: classes must cover [n)");
    partition_ = std::move(parts);
}

double CouponModel::element_prob(uint64_t x) const {
    if (x >= n_) throw std::out_of_range("element_prob: index out of range");
    const double nd = static_cast<double>(n_);
    switch (kind_) {
        case ModelKind::KUniform: return static_cast<double>(k_) / nd;
        case ModelKind::Lottery: return p_ + (1.0 - p_) / nd;
        case ModelKind::BlockPartition: return 1.0 / static_cast<double>(n_blocks_);
        case ModelKind::HypercubeSubcube: return std::ldexp(1.0, -static_cast<int>(k_));
        case ModelKind::GraphNeighborhood:
        case ModelKind::SpanningTree:
        case ModelKind::Explicit: return q_[x];
    }
    return 0.0;
}

std::optional<double> CouponModel::pair_prob(uint64_t x, uint64_t y) const {
    if (x == y) throw std::invalid_argument("pair_prob: x == y (use element_prob)");
    if (x >= n_ || y >= n_) throw std::out_of_range("pair_prob: index out of range");
    const double nd = static_cast<double>(n_);
    switch (kind_) {
        case ModelKind::KUniform: {
            const double kd = static_cast<double>(k_);
            return kd * (kd - 1.0) / (nd * (nd - 1.0));
        }
        case ModelKind::Lottery: return p_;
        case ModelKind::BlockPartition:
            return (x / block_size_ == y / block_size_)
                       ? 1.0 / static_cast<double>(n_blocks_)
                       : 0.0;
        case ModelKind::HypercubeSubcube: {
            const uint32_t dist = std::popcount(x ^ y);
            const double dd = static_cast<double>(d_), kd = static_cast<double>(k_);
            if (dist > d_ - k_) return 0.0;
            return std::exp(log_binomial(dd - dist, kd) - log_binomial(dd, kd) -
                            kd * std::log(2.0));
        }
        case ModelKind::GraphNeighborhood: {
            // x,y both covered iff the drawn vertex lies in both closed
            // neighbourhoods; count the intersection directly.
            const auto& a = closed_nbhd_[x];
            const auto& b = closed_nbhd_[y];
            size_t i = 0, j = 0, common = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i] == b[j]) {
                    ++common;
                    ++i;
                    ++j;
                } else if (a[i] < b[j])
                    ++i;
                else
                    ++j;
            }
            return static_cast<double>(common) / nd;
        }
        case ModelKind::Explicit: {
            KahanSum s;
            for (const auto& entry : support_) {
                const bool hx = std::binary_search(entry.members.begin(), entry.members.end(),
                                                   static_cast<uint32_t>(x));
                const bool hy = std::binary_search(entry.members.begin(), entry.members.end(),
                                                   static_cast<uint32_t>(y));
                if (hx && hy) s.add(entry.prob);
            }
            return s.value();
        }
        case ModelKind::SpanningTree: return std::nullopt;
    }
    return std::nullopt;
}

SubcubeClause sample_subcube_clause(const CouponModel& model, RngStream& rng) {
    if (model.kind() != ModelKind::HypercubeSubcube)
        throw std::invalid_argument("sample_subcube_clause: not a hypercube model");
    const uint32_t d = model.cube_dim();
    const uint32_t k = static_cast<uint32_t>(model.k_param());
    SubcubeClause c;
    // Floyd's sampler for the k fixed coordinates.
    for (uint32_t j = d - k; j < d; ++j) {
        const uint32_t t = static_cast<uint32_t>(rng.uniform_below(j + 1));
        const uint32_t pick = (c.mask >> t) & 1u ? j : t;
        c.mask |= 1u << pick;
    }
    c.bits = static_cast<uint32_t>(rng.next_u64()) & c.mask;
    return c;
}

std::vector<uint32_t> materialize_subcube(const SubcubeClause& clause, uint32_t d) {
    if (d > kSubcubeMaterializeMaxDim)
        throw std::domain_error("materialize_subcube: d > 30 exceeds the memory guard");
    std::vector<uint32_t> free_coords;
    for (uint32_t b = 0; b < d; ++b)
        if (!((clause.mask >> b) & 1u)) free_coords.push_back(b);
    const uint64_t count = 1ull << free_coords.size();
    std::vector<uint32_t> out;
    out.reserve(count);
    for (uint64_t idx = 0; idx < count; ++idx) {
        uint32_t val = clause.bits;
        for (size_t b = 0; b < free_coords.size(); ++b)
            if ((idx >> b) & 1ull) val |= 1u << free_coords[b];
        out.push_back(val);
    }
    return out;
}

CouponDraw sample(const CouponModel& model, RngStream& rng) {
    CouponDraw out;
    if (model.kind() == ModelKind::HypercubeSubcube &&
        model.cube_dim() > kSubcubeMaterializeDim) {
        out.clause = sample_subcube_clause(model, rng);
        return out;
    }
    Sampler s(model);
    out.members = s.draw(rng);
    if (model.kind() == ModelKind::HypercubeSubcube) out.clause = SubcubeClause{};
    return out;
}

Sampler::Sampler(const CouponModel& model) : model_(&model) {
    switch (model.kind()) {
        case ModelKind::KUniform:
            dedupe_ = Bitset(model.n());
            buf_.reserve(model.k_param());
            break;
        case ModelKind::HypercubeSubcube:
            if (model.cube_dim() > kSubcubeMaterializeDim)
                throw std::domain_error(
                    "Sampler: hypercube dimension above materialisation threshold; "
                    "use sample_subcube_clause");
            buf_.reserve(1ull << (model.cube_dim() - model.k_param()));
            break;
        case ModelKind::SpanningTree:
            st_next_.resize(model.graph().num_vertices());
            st_in_tree_.resize(model.graph().num_vertices());
            break;
        default: break;
    }
}

const std::vector<uint32_t>& Sampler::draw(RngStream& rng) {
    const CouponModel& m = *model_;
    buf_.clear();
    switch (m.kind()) {
        case ModelKind::KUniform: {
            const uint64_t n = m.n(), k = m.k_param();
            if (k == n) {
                buf_.resize(n);
                std::iota(buf_.begin(), buf_.end(), 0u);
                break;
            }
            touched_.clear();
            for (uint64_t j = n - k; j < n; ++j) {
                const uint64_t t = rng.uniform_below(j + 1);
                const uint64_t pick = dedupe_.test(t) ? j : t;
                dedupe_.set(pick);
                touched_.push_back(static_cast<uint32_t>(pick));
                buf_.push_back(static_cast<uint32_t>(pick));
            }
            for (uint32_t x : touched_) dedupe_.clear(x);
            break;
        }
        case ModelKind::Lottery: {
            if (rng.bernoulli(m.lottery_p())) {
                buf_.resize(m.n());
                std::iota(buf_.begin(), buf_.end(), 0u);
            } else {
                buf_.push_back(static_cast<uint32_t>(rng.uniform_below(m.n())));
            }
            break;
        }
        case ModelKind::BlockPartition: {
            const uint64_t b = rng.uniform_below(m.num_blocks());
            buf_.resize(m.block_size());
            std::iota(buf_.begin(), buf_.end(), static_cast<uint32_t>(b * m.block_size()));
            break;
        }
        case ModelKind::GraphNeighborhood: {
            const uint32_t v = static_cast<uint32_t>(rng.uniform_below(m.n()));
            buf_ = m.closed_neighborhood(v);
            break;
        }
        case ModelKind::HypercubeSubcube: {
            const SubcubeClause c = sample_subcube_clause(m, rng);
            const uint32_t d = m.cube_dim();
            free_coords_.clear();
            for (uint32_t b = 0; b < d; ++b)
                if (!((c.mask >> b) & 1u)) free_coords_.push_back(b);
            const uint64_t count = 1ull << free_coords_.size();
            buf_.resize(count);
            for (uint64_t idx = 0; idx < count; ++idx) {
                uint32_t val = c.bits;
                for (size_t b = 0; b < free_coords_.size(); ++b)
                    if ((idx >> b) & 1ull) val |= 1u << free_coords_[b];
                buf_[idx] = val;
            }
            break;
        }
        case ModelKind::SpanningTree:
            buf_ = sample_spanning_tree(m.graph(), rng, st_next_, st_in_tree_);
            break;
        case ModelKind::Explicit: {
            const double u = rng.next_double();
            const auto& cum = m.support_cum_;
            const size_t idx =
                std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
            buf_ = m.support()[std::min(idx, cum.size() - 1)].members;
            break;
        }
    }
    return buf_;
}

}  // namespace covertime
