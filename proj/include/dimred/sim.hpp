#pragma once

#include "dimred/data.hpp"

#include <cstdint>
#include <string>

namespace dimred::sim {

/// Feature laws: (a) N(0, I), (b) equal mixture of N(-1, I) and N(+1, I),
/// (c) N(0, 0.6 I + 0.4 11').
enum class FeatureDist { IndepGaussian, GaussianMixture, CorrelatedGaussian };

enum class ModelKind { Model1, Model2, Model3, Model4 };

struct ResponseModel {
    ModelKind kind = ModelKind::Model1;
    int s = 10;             ///< informative feature count
    double noise_sd = 0.5;  ///< additive N(0, noise_sd^2) noise, Models 1-3
    double beta0 = 0.5;     ///< Model 4 intercept
};

DataMatrix gen_features(FeatureDist dist, Index n, Index p, std::uint64_t seed);

/// Model 4 draws its slopes from Unif(-2, 2) out of the same seeded stream,
/// once per call (i.e. once per dataset).
Response gen_response(const ResponseModel& model, const DataMatrix& x, std::uint64_t seed);

/// Model 4 with explicit slopes; `betas.size()` plays the role of s.
Response gen_logistic_response(const DataMatrix& x, double beta0, const Eigen::VectorXd& betas,
                               std::uint64_t seed);

/// Noise-free regression function for one row (Models 1-3).
double regression_mean(ModelKind kind, const Eigen::Ref<const Eigen::RowVectorXd>& row, int s);

struct SettingSpec {
    FeatureDist dist = FeatureDist::IndepGaussian;
    ModelKind model = ModelKind::Model1;
    Index n = 1000;
    Index p = 500;
    int s = 10;
};

/// One simulated dataset. `seed` should already be keyed by
/// (setting, repetition); features and response use derived sub-streams.
/// Model 1 rows with sum of squares below 1e-300 are redrawn.
Dataset make_setting(const SettingSpec& spec, std::uint64_t seed);

/// "a1".."c4" <-> (dist, model).
SettingSpec parse_setting(const std::string& id);
std::string setting_id(FeatureDist dist, ModelKind model);
/// Stable integer key used for seed derivation.
std::uint64_t setting_key(FeatureDist dist, ModelKind model);

}  // namespace dimred::sim
