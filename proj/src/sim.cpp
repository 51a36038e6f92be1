#include "dimred/sim.hpp"

#include "dimred/errors.hpp"
#include "dimred/rng.hpp"

#include <cmath>
#include <numbers>

namespace dimred::sim {

namespace {

void fill_row(FeatureDist dist, Eigen::Ref<Eigen::RowVectorXd> row, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    switch (dist) {
        case FeatureDist::IndepGaussian:
            for (Index j = 0; j < row.size(); ++j) row[j] = normal(rng);
            break;
        case FeatureDist::GaussianMixture: {
            std::bernoulli_distribution coin(0.5);
            const double shift = coin(rng) ? 1.0 : -1.0;
            for (Index j = 0; j < row.size(); ++j) row[j] = shift + normal(rng);
            break;
        }
        case FeatureDist::CorrelatedGaussian: {
            // sqrt(0.6) z + sqrt(0.4) u 1 has covariance 0.6 I + 0.4 11'.
            const double common = std::sqrt(0.4) * normal(rng);
            const double own = std::sqrt(0.6);
            for (Index j = 0; j < row.size(); ++j) row[j] = own * normal(rng) + common;
            break;
        }
    }
}

void check_dims(const ResponseModel& m, Index p) {
    if (m.s < 1) throw ParameterError("response model needs s >= 1");
    const Index needed = m.kind == ModelKind::Model2 ? m.s + 1 : m.s;
    if (p < needed)
        throw DimensionError("response model needs p >= " + std::to_string(needed) + ", got " + std::to_string(p));
}

}  // namespace

DataMatrix gen_features(FeatureDist dist, Index n, Index p, std::uint64_t seed) {
    if (n < 2) throw SizeError("need at least 2 samples");
    if (p < 1) throw ParameterError("need p >= 1");
    Rng rng(seed);
    DataMatrix x(n, p);
    for (Index i = 0; i < n; ++i) fill_row(dist, x.row(i), rng);
    return x;
}

double regression_mean(ModelKind kind, const Eigen::Ref<const Eigen::RowVectorXd>& row, int s) {
    switch (kind) {
        case ModelKind::Model1: {
            const auto head = row.head(s).array();
            const double cubes = head.cube().sum();
            const double squares = head.square().sum();
            return std::cbrt(cubes) * std::log(std::sqrt(squares));
        }
        case ModelKind::Model2: {
            double y = 0.0;
            for (int j = 0; j < s; ++j) y += row[j] / (1.0 + std::exp(row[j + 1]));
            return y;
        }
        case ModelKind::Model3:
            return std::sin(std::numbers::pi * row.head(s).sum() / 10.0);
        case ModelKind::Model4:
            break;
    }
    throw ParameterError("Model 4 has no regression mean");
}

Response gen_logistic_response(const DataMatrix& x, double beta0, const Eigen::VectorXd& betas,
                               std::uint64_t seed) {
    if (x.cols() < betas.size()) throw DimensionError("logistic model has more slopes than features");
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<int> labels(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i) {
        const double eta = beta0 + x.row(i).head(betas.size()).dot(betas.transpose());
        const double prob = 1.0 / (1.0 + std::exp(-eta));
        labels[static_cast<std::size_t>(i)] = unif(rng) < prob ? 1 : 0;
    }
    return Response::categorical(labels);
}

Response gen_response(const ResponseModel& model, const DataMatrix& x, std::uint64_t seed) {
    check_dims(model, x.cols());
    if (model.kind == ModelKind::Model4) {
        Rng rng(derive_seed(seed, {0xBE7A}));
        std::uniform_real_distribution<double> slope(-2.0, 2.0);
        Eigen::VectorXd betas(model.s);
        for (int j = 0; j < model.s; ++j) betas[j] = slope(rng);
        return gen_logistic_response(x, model.beta0, betas, derive_seed(seed, {0xBE7B}));
    }

    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, model.noise_sd > 0.0 ? model.noise_sd : 1.0);
    Eigen::VectorXd y(x.rows());
    for (Index i = 0; i < x.rows(); ++i) {
        const double mean = regression_mean(model.kind, x.row(i), model.s);
        if (!std::isfinite(mean)) throw NumericalError("non-finite regression mean at row " + std::to_string(i));
        y[i] = mean + (model.noise_sd > 0.0 ? noise(rng) : 0.0);
    }
    return Response::continuous(std::move(y));
}

Dataset make_setting(const SettingSpec& spec, std::uint64_t seed) {
    ResponseModel model{spec.model, spec.s};
    check_dims(model, spec.p);
    DataMatrix x = gen_features(spec.dist, spec.n, spec.p, derive_seed(seed, {1}));
    if (spec.model == ModelKind::Model1) {
        Rng redraw(derive_seed(seed, {3}));
        for (Index i = 0; i < x.rows(); ++i)
            while (x.row(i).head(spec.s).squaredNorm() < 1e-300) fill_row(spec.dist, x.row(i), redraw);
    }
    Response y = gen_response(model, x, derive_seed(seed, {2}));
    return Dataset{std::move(x), std::move(y)};
}

SettingSpec parse_setting(const std::string& id) {
    if (id.size() != 2 || id[0] < 'a' || id[0] > 'c' || id[1] < '1' || id[1] > '4')
        throw ParameterError("unknown setting id '" + id + "' (expected a1..c4)");
    SettingSpec s;
    s.dist = static_cast<FeatureDist>(id[0] - 'a');
    s.model = static_cast<ModelKind>(id[1] - '1');
    return s;
}

std::string setting_id(FeatureDist dist, ModelKind model) {
    std::string id;
    id += static_cast<char>('a' + static_cast<int>(dist));
    id += static_cast<char>('1' + static_cast<int>(model));
    return id;
}

std::uint64_t setting_key(FeatureDist dist, ModelKind model) {
    return 10u * static_cast<std::uint64_t>(dist) + static_cast<std::uint64_t>(model) + 1u;
}

}  // namespace dimred::sim
