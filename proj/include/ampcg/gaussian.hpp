#pragma once

// Gaussian data for a chain graph under the block-recursive model: each
// chain component τ satisfies x_τ = B_τ x_pa(τ) + ε_τ with ε_τ ~ N(0, Λ_τ⁻¹),
// B_τ sparse on the directed edges into τ and Λ_τ sparse on the undirected
// edges within τ. Plus the Fisher-z conditional-independence test over a
// sampled dataset, which turns line 6 of the learner into a hypothesis test.
//
// Randomness is pinned for reproducibility: mt19937_64, uniforms from the
// top 53 bits, normals via Box-Muller. Same seed, same bits (modulo libm).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ampcg/graph.hpp"
#include "ampcg/oracle.hpp"

namespace ampcg {

struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; // (0,1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Uniform over ±[lo,hi].
    double signed_uniform(double lo, double hi) {
        const double sign = uniform() < 0.5 ? -1.0 : 1.0;
        return sign * (lo + uniform() * (hi - lo));
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Chain components in a topological order of the component quotient,
// smallest node index first for determinism.
inline std::vector<NodeSet> topological_components(const HybridGraph& g) {
    const int n = g.node_count();
    std::vector<int> comp(n, -1);
    std::vector<NodeSet> members;
    for (NodeId v = 0; v < n; ++v) {
        if (comp[v] != -1) continue;
        NodeSet c = connectivity_component(g, v);
        for (NodeId w : c) comp[w] = static_cast<int>(members.size());
        members.push_back(std::move(c));
    }
    const int k = static_cast<int>(members.size());
    std::vector<NodeMask> arcs(k, 0);
    std::vector<int> indeg(k, 0);
    for (auto [u, v] : g.directed_edges()) {
        if (comp[u] != comp[v] && !(arcs[comp[u]] >> comp[v] & 1)) {
            arcs[comp[u]] |= NodeMask{1} << comp[v];
            ++indeg[comp[v]];
        }
    }
    std::vector<NodeSet> order;
    std::vector<bool> emitted(k, false);
    while (static_cast<int>(order.size()) < k) {
        int next = -1;
        for (int c = 0; c < k; ++c)
            if (!emitted[c] && indeg[c] == 0 &&
                (next == -1 || members[c].front() < members[next].front()))
                next = c;
        if (next == -1) throw std::invalid_argument("component quotient is cyclic");
        emitted[next] = true;
        order.push_back(members[next]);
        for (int d = 0; d < k; ++d)
            if (arcs[next] >> d & 1) --indeg[d];
    }
    return order;
}

} // namespace detail

struct ComponentParams {
    NodeSet nodes;                // sorted members of the chain component
    NodeSet component_parents;    // pa_G(nodes), sorted
    Eigen::MatrixXd coefficients; // |nodes| x |component_parents|, row v col u = weight of u -> v
    Eigen::MatrixXd precision;    // |nodes| x |nodes|, symmetric positive definite
};

struct AmpGaussianParams {
    std::vector<std::string> labels;
    std::vector<ComponentParams> components; // in topological order
};

// Nonzero edge coefficients are uniform over ±[0.4, 0.9]; within-component
// precisions put ±[0.2, 0.4] on undirected edges with diagonal
// 1 + row abs-sum, so Λ is strictly diagonally dominant, hence positive
// definite. Sparsity patterns match the graph exactly.
inline AmpGaussianParams random_params(const ChainGraph& cg, std::uint64_t seed) {
    const HybridGraph& g = cg.graph();
    detail::Rng rng(seed);
    AmpGaussianParams params{g.labels(), {}};
    for (const NodeSet& nodes : detail::topological_components(g)) {
        ComponentParams cp;
        cp.nodes = nodes;
        cp.component_parents = parents(g, nodes);
        const int k = static_cast<int>(nodes.size());
        const int p = static_cast<int>(cp.component_parents.size());
        cp.coefficients = Eigen::MatrixXd::Zero(k, p);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < p; ++j)
                if (g.has_directed(cp.component_parents[j], nodes[i]))
                    cp.coefficients(i, j) = rng.signed_uniform(0.4, 0.9);
        cp.precision = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (g.has_undirected(nodes[i], nodes[j])) {
                    const double w = rng.signed_uniform(0.2, 0.4);
                    cp.precision(i, j) = cp.precision(j, i) = w;
                }
        for (int i = 0; i < k; ++i) {
            double row = 0.0;
            for (int j = 0; j < k; ++j)
                if (j != i) row += std::abs(cp.precision(i, j));
            cp.precision(i, i) = 1.0 + row;
        }
        params.components.push_back(std::move(cp));
    }
    return params;
}

struct Dataset {
    std::vector<std::string> columns;
    Eigen::MatrixXd values; // rows x columns

    int row_count() const { return static_cast<int>(values.rows()); }

    std::optional<int> find_column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return std::nullopt;
    }
};

// ε_τ is drawn by solving Lᵀ ε = z against the Cholesky factor Λ = L Lᵀ,
// giving cov(ε) = Λ⁻¹ without forming the inverse.
inline Dataset sample(const AmpGaussianParams& params, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be at least 1");
    detail::Rng rng(seed);
    const int nv = static_cast<int>(params.labels.size());
    Dataset d{params.labels, Eigen::MatrixXd::Zero(n, nv)};
    for (const ComponentParams& cp : params.components) {
        const int k = static_cast<int>(cp.nodes.size());
        const int p = static_cast<int>(cp.component_parents.size());
        Eigen::MatrixXd noise(n, k);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < k; ++c) noise(r, c) = rng.normal();
        Eigen::LLT<Eigen::MatrixXd> llt(cp.precision);
        if (llt.info() != Eigen::Success)
            throw DegenerateDataError("component precision matrix is not positive definite");
        // noise rows become N(0, Λ⁻¹): ε = L⁻ᵀ z.
        Eigen::MatrixXd eps =
            llt.matrixU().solve(noise.transpose()).transpose();
        if (p > 0) {
            Eigen::MatrixXd parent_values(n, p);
            for (int j = 0; j < p; ++j) parent_values.col(j) = d.values.col(cp.component_parents[j]);
            eps += parent_values * cp.coefficients.transpose();
        }
        for (int c = 0; c < k; ++c) d.values.col(cp.nodes[c]) = eps.col(c);
    }
    return d;
}

namespace detail {

inline Eigen::MatrixXd correlation_matrix(const Dataset& d) {
    const int n = d.row_count();
    const Eigen::MatrixXd centered = d.values.rowwise() - d.values.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    const Eigen::VectorXd sd = cov.diagonal().array().sqrt();
    Eigen::MatrixXd corr = cov;
    for (int i = 0; i < corr.rows(); ++i)
        for (int j = 0; j < corr.cols(); ++j) corr(i, j) /= sd(i) * sd(j);
    return corr;
}

// Partial correlation of columns x,y given Z, by inverting the correlation
// submatrix over {x,y} ∪ Z. Throws DegenerateDataError when the submatrix
// is singular (collinear or constant columns).
inline double partial_correlation(const Eigen::MatrixXd& corr, int x, int y, const NodeSet& z) {
    std::vector<int> idx{x, y};
    idx.insert(idx.end(), z.begin(), z.end());
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double v = corr(idx[i], idx[j]);
            if (!std::isfinite(v)) throw DegenerateDataError("degenerate data: constant column");
            sub(i, j) = v;
        }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (!lu.isInvertible())
        throw DegenerateDataError("degenerate data: singular correlation submatrix");
    const Eigen::MatrixXd inv = lu.inverse();
    return -inv(0, 1) / std::sqrt(inv(0, 0) * inv(1, 1));
}

// Φ⁻¹(p) by bisection on Φ(x) = erfc(-x/√2)/2; exact enough for test
// thresholds and free of magic constants.
inline double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline bool fisher_z_decision(const Eigen::MatrixXd& corr, int n, int x, int y, const NodeSet& z,
                              double threshold) {
    if (n <= static_cast<int>(z.size()) + 3)
        throw std::invalid_argument("need more rows than |Z| + 3");
    double r = partial_correlation(corr, x, y, z);
    const double cap = 1.0 - 1e-12; // keep the log transform finite
    r = std::clamp(r, -cap, cap);
    const double stat = std::abs(0.5 * std::log((1.0 + r) / (1.0 - r))) *
                        std::sqrt(static_cast<double>(n) - static_cast<double>(z.size()) - 3.0);
    return stat <= threshold;
}

} // namespace detail

// Declares x ⊥ y | Z at level alpha iff |½ ln((1+r)/(1−r))|·√(n−|Z|−3) stays
// below the two-sided normal quantile, r the sample partial correlation.
inline bool fisher_z_independent(const Dataset& d, int x, int y, const NodeSet& z, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    const int nv = static_cast<int>(d.columns.size());
    NodeSet zz = sorted_unique(z);
    if (x < 0 || y < 0 || x >= nv || y >= nv) throw std::invalid_argument("column out of range");
    if (x == y) throw std::invalid_argument("x and y must differ");
    for (NodeId v : zz)
        if (v < 0 || v >= nv || v == x || v == y)
            throw std::invalid_argument("conditioning set must be disjoint from {x,y}");
    return detail::fisher_z_decision(detail::correlation_matrix(d), d.row_count(), x, y, zz,
                                     detail::standard_normal_quantile(1.0 - alpha / 2.0));
}

// Fisher-z oracle over a dataset. Accepts singleton X and Y only, memoizes,
// and counts the hypothesis tests actually performed. Single-threaded.
class DataOracle final : public IndependenceOracle {
public:
    DataOracle(Dataset d, double alpha)
        : data_(std::move(d)),
          corr_(detail::correlation_matrix(data_)),
          alpha_(alpha),
          threshold_(detail::standard_normal_quantile(1.0 - alpha / 2.0)) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    }

    bool query(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override {
        if (x.size() != 1 || y.size() != 1)
            throw std::invalid_argument("data oracle supports singleton X and Y only");
        if (x[0] == y[0]) throw std::invalid_argument("query sets must be disjoint");
        for (NodeId v : z)
            if (v == x[0] || v == y[0]) throw std::invalid_argument("query sets must be disjoint");
        auto key = detail::canonical_key(x, y, z);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const bool answer = detail::fisher_z_decision(corr_, data_.row_count(), x[0], y[0],
                                                      std::get<2>(key), threshold_);
        ++tests_performed_;
        cache_.emplace(std::move(key), answer);
        return answer;
    }

    std::size_t tests_performed() const { return tests_performed_; }
    const Dataset& dataset() const { return data_; }

private:
    Dataset data_;
    Eigen::MatrixXd corr_;
    double alpha_;
    double threshold_;
    mutable std::size_t tests_performed_ = 0;
    mutable std::map<detail::QueryKey, bool> cache_;
};

inline std::shared_ptr<const IndependenceOracle> make_data_oracle(Dataset d, double alpha) {
    return std::make_shared<DataOracle>(std::move(d), alpha);
}

// CSV: header of node labels, then one row of decimal floats per sample.
// Values are written with 17 significant digits so a round trip is
// bit-faithful.
inline std::string format_csv(const Dataset& d) {
    std::ostringstream out;
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
        if (i) out << ',';
        out << d.columns[i];
    }
    out << '\n';
    char buf[64];
    for (int r = 0; r < d.row_count(); ++r) {
        for (int c = 0; c < static_cast<int>(d.columns.size()); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", d.values(r, c));
            if (c) out << ',';
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

inline Dataset parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
    Dataset d;
    {
        std::istringstream header(line);
        for (std::string col; std::getline(header, col, ',');) {
            if (col.empty()) throw std::runtime_error("csv: empty column name");
            d.columns.push_back(col);
        }
    }
    const int nv = static_cast<int>(d.columns.size());
    std::vector<double> flat;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        int fields = 0;
        for (std::string cell; std::getline(row, cell, ',');) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("csv: bad value '" + cell + "'");
            }
            if (pos != cell.size()) throw std::runtime_error("csv: bad value '" + cell + "'");
            flat.push_back(v);
            ++fields;
        }
        if (fields != nv) throw std::runtime_error("csv: row width mismatch");
        ++rows;
    }
    d.values.resize(rows, nv);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < nv; ++c) d.values(r, c) = flat[r * nv + c];
    return d;
}

inline Dataset read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

} // namespace ampcg
