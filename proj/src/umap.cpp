#include "dimred/umap.hpp"

#include "dimred/errors.hpp"
#include "dimred/parallel.hpp"
#include "dimred/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace dimred::umap {

namespace {

struct Edge {
    Index head;
    Index tail;
    double weight;
};

std::vector<Edge> graph_edges(const FuzzyGraph& g) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(g.weights.nonZeros()));
    for (Index col = 0; col < g.weights.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(g.weights, col); it; ++it)
            if (it.value() > 0.0) edges.push_back({it.row(), it.col(), it.value()});
    return edges;
}

double clip(double v, double bound) { return std::clamp(v, -bound, bound); }

// 2ab d^{2(b-1)} / (1 + a d^{2b}); the attractive step is -coef * (zi - zj).
double attraction_coef(double d2, const CurveParams& c) {
    return 2.0 * c.a * c.b * std::pow(d2, c.b - 1.0) / (1.0 + c.a * std::pow(d2, c.b));
}

// 2b / ((eps + d^2)(1 + a d^{2b})); the repulsive step is +coef * (zi - zj).
double repulsion_coef(double d2, const CurveParams& c) {
    return 2.0 * c.b / ((0.001 + d2) * (1.0 + c.a * std::pow(d2, c.b)));
}

void attract(double* zi, double* zj, int dim, double lr, const CurveParams& c, double clip_bound, bool move_tail) {
    double d2 = 0.0;
    for (int q = 0; q < dim; ++q) d2 += (zi[q] - zj[q]) * (zi[q] - zj[q]);
    if (d2 <= 0.0) return;
    const double coef = attraction_coef(d2, c);
    for (int q = 0; q < dim; ++q) {
        const double step = clip(-coef * (zi[q] - zj[q]), clip_bound) * lr;
        zi[q] += step;
        if (move_tail) zj[q] -= step;
    }
}

void repel(double* zi, const double* zk, int dim, double lr, const CurveParams& c, double clip_bound) {
    double d2 = 0.0;
    for (int q = 0; q < dim; ++q) d2 += (zi[q] - zk[q]) * (zi[q] - zk[q]);
    if (d2 <= 0.0) return;
    const double coef = repulsion_coef(d2, c);
    for (int q = 0; q < dim; ++q) zi[q] += clip(coef * (zi[q] - zk[q]), clip_bound) * lr;
}

// Per-edge sampling clocks (epochs between samples, next sample epoch).
struct Schedule {
    std::vector<double> per_sample, next_sample, per_negative, next_negative;

    explicit Schedule(const std::vector<Edge>& edges, double neg_rate) {
        double wmax = 0.0;
        for (const auto& e : edges) wmax = std::max(wmax, e.weight);
        for (const auto& e : edges) {
            const double eps = wmax / e.weight;
            per_sample.push_back(eps);
            per_negative.push_back(neg_rate > 0.0 ? eps / neg_rate : 0.0);
        }
        next_sample = per_sample;
        next_negative = per_negative;
    }
};

void check_finite(const Embedding& e, int epoch) {
    if (!e.allFinite()) throw OptimizerError("non-finite embedding coordinate", epoch);
}

}  // namespace

double edge_attraction_loss(const Eigen::Ref<const Eigen::RowVectorXd>& zi,
                            const Eigen::Ref<const Eigen::RowVectorXd>& zj, double w, const CurveParams& c) {
    return -w * std::log(membership_sq((zi - zj).squaredNorm(), c));
}

Eigen::RowVectorXd edge_attraction_gradient(const Eigen::Ref<const Eigen::RowVectorXd>& zi,
                                            const Eigen::Ref<const Eigen::RowVectorXd>& zj, double w,
                                            const CurveParams& c) {
    const double d2 = (zi - zj).squaredNorm();
    if (d2 <= 0.0) return Eigen::RowVectorXd::Zero(zi.size());
    return w * attraction_coef(d2, c) * (zi - zj);
}

Embedding optimize(const FuzzyGraph& g, Embedding emb, const CurveParams& curve, const OptimizeConfig& cfg) {
    if (emb.rows() != g.n()) throw DimensionError("initial embedding does not match graph size");
    if (cfg.epochs < 0) throw ParameterError("epochs must be >= 0");
    const int dim = static_cast<int>(emb.cols());
    const Index n = emb.rows();
    const std::vector<Edge> edges = graph_edges(g);
    Schedule sched(edges, cfg.negative_sample_rate);

    std::vector<char> isolated(static_cast<std::size_t>(n), 1);
    for (const auto& e : edges) isolated[static_cast<std::size_t>(e.head)] = isolated[static_cast<std::size_t>(e.tail)] = 0;
    const int isolated_negatives = static_cast<int>(std::lround(cfg.negative_sample_rate));

    Rng rng(cfg.seed);
    std::uniform_int_distribution<Index> any_vertex(0, n - 1);
    const int threads = cfg.parallel ? parallel::region_threads() : 1;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = cfg.learning_rate * (1.0 - static_cast<double>(epoch) / cfg.epochs);
        const double now = static_cast<double>(epoch);
        if (threads <= 1) {
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (sched.next_sample[e] > now) continue;
                double* zi = emb.row(edges[e].head).data();
                attract(zi, emb.row(edges[e].tail).data(), dim, lr, curve, cfg.gradient_clip, true);
                sched.next_sample[e] += sched.per_sample[e];
                if (sched.per_negative[e] <= 0.0) continue;
                const int n_neg = static_cast<int>((now - sched.next_negative[e]) / sched.per_negative[e]);
                for (int t = 0; t < n_neg; ++t) {
                    const Index k = any_vertex(rng);
                    if (k == edges[e].head) continue;
                    repel(zi, emb.row(k).data(), dim, lr, curve, cfg.gradient_clip);
                }
                sched.next_negative[e] += n_neg * sched.per_negative[e];
            }
        } else {
            // Asynchronous (lock-free) updates; edge clocks are owned per edge.
#pragma omp parallel num_threads(threads)
            {
                Rng local(derive_seed(cfg.seed, {static_cast<std::uint64_t>(epoch),
                                                 static_cast<std::uint64_t>(omp_get_thread_num())}));
                std::uniform_int_distribution<Index> pick(0, n - 1);
#pragma omp for schedule(static)
                for (std::size_t e = 0; e < edges.size(); ++e) {
                    if (sched.next_sample[e] > now) continue;
                    double* zi = emb.row(edges[e].head).data();
                    attract(zi, emb.row(edges[e].tail).data(), dim, lr, curve, cfg.gradient_clip, true);
                    sched.next_sample[e] += sched.per_sample[e];
                    if (sched.per_negative[e] <= 0.0) continue;
                    const int n_neg = static_cast<int>((now - sched.next_negative[e]) / sched.per_negative[e]);
                    for (int t = 0; t < n_neg; ++t) {
                        const Index k = pick(local);
                        if (k == edges[e].head) continue;
                        repel(zi, emb.row(k).data(), dim, lr, curve, cfg.gradient_clip);
                    }
                    sched.next_negative[e] += n_neg * sched.per_negative[e];
                }
            }
        }
        // Points without any edge still feel the repulsive term.
        for (Index i = 0; i < n; ++i) {
            if (!isolated[static_cast<std::size_t>(i)]) continue;
            for (int t = 0; t < isolated_negatives; ++t) {
                const Index k = any_vertex(rng);
                if (k != i) repel(emb.row(i).data(), emb.row(k).data(), dim, lr, curve, cfg.gradient_clip);
            }
        }
        if ((epoch & 15) == 15 || epoch + 1 == cfg.epochs) check_finite(emb, epoch);
    }
    return emb;
}

UmapModel fit(const DataMatrix& x, const Response* y, const UmapParams& params) {
    validate(x);
    if (params.dim < 1) throw ParameterError("embedding dimension must be >= 1");
    UmapModel m;
    m.config = params;
    m.curve = fit_ab(params.min_dist, params.spread);
    m.train_x = x;

    GraphOptions gopts{params.n_neighbors, params.supervision, params.alpha, params.slices};
    GraphBuild build = build_graph(x, y, gopts);
    m.train_params = std::move(build.params);
    m.graph = std::move(build.graph);

    SpectralResult init = spectral_init(m.graph, params.dim, derive_seed(params.opt.seed, {0x5EC}));
    m.init_fallback = init.fallback;
    m.embedding = optimize(m.graph, std::move(init.coords), m.curve, params.opt);
    return m;
}

Embedding transform(const UmapModel& m, const DataMatrix& x_new, std::optional<int> epochs) {
    if (x_new.cols() != m.train_x.cols())
        throw DimensionError("transform expects " + std::to_string(m.train_x.cols()) + " columns, got " +
                             std::to_string(x_new.cols()));
    const int n_epochs = epochs.value_or(m.config.transform_epochs);
    const int k = std::min<int>(m.config.n_neighbors, static_cast<int>(m.train_x.rows()));
    const NeighborList nl = kernels::knn(m.train_x, x_new, k, false);
    const int dim = static_cast<int>(m.embedding.cols());
    const Index n_train = m.train_x.rows();
    Embedding out(x_new.rows(), dim);

#pragma omp parallel for schedule(static) num_threads(parallel::region_threads())
    for (Index i = 0; i < x_new.rows(); ++i) {
        std::vector<double> w(static_cast<std::size_t>(k));
        double wsum = 0.0;
        int exact = 0;
        for (int t = 0; t < k; ++t) exact += nl.distance(i, t) == 0.0 ? 1 : 0;
        for (int t = 0; t < k; ++t) {
            const auto j = static_cast<std::size_t>(nl.neighbor(i, t));
            double wt = membership(nl.distance(i, t), m.train_params.rho[j], m.train_params.sigma[j]);
            // An exact duplicate of training points sits on their barycenter.
            if (exact > 0) wt = nl.distance(i, t) == 0.0 ? 1.0 : 0.0;
            w[static_cast<std::size_t>(t)] = wt;
            wsum += wt;
        }
        if (!(wsum > 0.0)) {
            std::fill(w.begin(), w.end(), 1.0);
            wsum = k;
        }
        Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(dim);
        for (int t = 0; t < k; ++t) z += (w[static_cast<std::size_t>(t)] / wsum) * m.embedding.row(nl.neighbor(i, t));

        if (n_epochs > 0) {
            Rng rng(derive_seed(m.config.opt.seed, {0x7A5, static_cast<std::uint64_t>(i)}));
            std::uniform_int_distribution<Index> pick(0, n_train - 1);
            double wmax = *std::max_element(w.begin(), w.end());
            std::vector<double> per(static_cast<std::size_t>(k), -1.0), next, per_neg, next_neg;
            for (int t = 0; t < k; ++t)
                if (w[static_cast<std::size_t>(t)] > 0.0) per[static_cast<std::size_t>(t)] = wmax / w[static_cast<std::size_t>(t)];
            next = per;
            per_neg = per;
            const double rate = m.config.opt.negative_sample_rate;
            for (auto& v : per_neg) v = rate > 0.0 && v > 0.0 ? v / rate : -1.0;
            next_neg = per_neg;
            for (int epoch = 0; epoch < n_epochs; ++epoch) {
                const double lr = 0.25 * m.config.opt.learning_rate * (1.0 - static_cast<double>(epoch) / n_epochs);
                for (int t = 0; t < k; ++t) {
                    const auto ts = static_cast<std::size_t>(t);
                    if (per[ts] <= 0.0 || next[ts] > epoch) continue;
                    Eigen::RowVectorXd anchor = m.embedding.row(nl.neighbor(i, t));
                    attract(z.data(), anchor.data(), dim, lr, m.curve, m.config.opt.gradient_clip, false);
                    next[ts] += per[ts];
                    if (per_neg[ts] <= 0.0) continue;
                    const int n_neg = static_cast<int>((epoch - next_neg[ts]) / per_neg[ts]);
                    for (int s = 0; s < n_neg; ++s)
                        repel(z.data(), m.embedding.row(pick(rng)).data(), dim, lr, m.curve, m.config.opt.gradient_clip);
                    next_neg[ts] += n_neg * per_neg[ts];
                }
            }
        }
        out.row(i) = z;
    }
    if (!out.allFinite()) throw OptimizerError("non-finite coordinate in transform", n_epochs);
    return out;
}

std::string supervision_name(Supervision s) {
    switch (s) {
        case Supervision::None: return "none";
        case Supervision::Categorical: return "categorical";
        case Supervision::Continuous: return "continuous";
        case Supervision::Sliced: return "sliced";
    }
    return "none";
}

Supervision parse_supervision(const std::string& s) {
    if (s == "none") return Supervision::None;
    if (s == "categorical") return Supervision::Categorical;
    if (s == "continuous") return Supervision::Continuous;
    if (s == "sliced") return Supervision::Sliced;
    throw ParameterError("unknown supervision '" + s + "'");
}

}  // namespace dimred::umap
